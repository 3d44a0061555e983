//! Enumeration of F_p-points on plane curves and sampling on surfaces.

use rand::Rng;
use rayon::prelude::*;

use crate::conic::projective_points;
use crate::gf::Fp;
use crate::poly::{MultiPoly, ProjPoint};
use crate::univariate::UniPoly;

/// Forms h_k with f(X + l*E) = sum_k l^k h_k(X).
pub fn taylor_along(f: &MultiPoly, e: &[u64]) -> Vec<MultiPoly> {
    let field = f.field();
    let d = f.total_degree().unwrap_or(0);
    let mut out = vec![f.clone()];
    for k in 1..=d {
        let prev = out.last().unwrap();
        let mut next = MultiPoly::zero(field, f.vars());
        for (i, &ei) in e.iter().enumerate() {
            if ei != 0 {
                next = next.add(&prev.partial(i).scale(ei));
            }
        }
        out.push(next.scale(field.inv(k as u64 % field.modulus()).expect("p > degree")));
    }
    out
}

/// Roots of f on the line {X + l*E}: the univariate polynomial in l.
fn line_poly(field: Fp, taylor: &[MultiPoly], x: &[u64]) -> UniPoly {
    UniPoly::new(field, taylor.iter().map(|h| h.eval(x)).collect())
}

/// All F_p-points of the curve f = 0 in P^2, sorted.
///
/// Lines through a point E off the curve cover every other point exactly once;
/// each line meets the curve in the roots of a univariate polynomial.
pub fn curve_points(f: &MultiPoly) -> Vec<ProjPoint> {
    let field = f.field();
    let n = f.nvars();
    assert!(!f.is_zero(), "zero polynomial has no curve");
    let d = f.total_degree().unwrap_or(0) as u64;
    let off = projective_points(field, n).find(|pt| !f.vanishes_at(pt));
    let (Some(e), true) = (off, field.modulus() > d) else {
        return curve_points_brute(f);
    };
    let ec = e.coords().to_vec();
    let taylor = taylor_along(f, &ec);
    // a coordinate hyperplane missing E parametrizes the lines through E
    let k = (0..n).find(|&i| ec[i] != 0).unwrap();
    let p = field.modulus();
    let total: u64 = (0..n - 1).map(|j| p.pow(j as u32)).sum();
    let mut out: Vec<ProjPoint> = (0..total)
        .into_par_iter()
        .flat_map_iter(|idx| {
            let mut x = hyperplane_point(field, n, k, idx);
            x.iter_mut().for_each(|c| *c %= p);
            let u = line_poly(field, &taylor, &x);
            u.roots()
                .into_iter()
                .map(|r| {
                    let c: Vec<u64> = (0..n).map(|i| field.add(x[i], field.mul(r, ec[i]))).collect();
                    ProjPoint::new(field, &c).unwrap()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort();
    out
}

/// The idx-th point of the hyperplane {x_k = 0} in canonical enumeration.
fn hyperplane_point(field: Fp, n: usize, k: usize, idx: u64) -> Vec<u64> {
    let p = field.modulus();
    let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let m = others.len();
    // leading position lead has a 1, later ones free
    let mut rem = idx;
    for lead in 0..m {
        let count = p.pow((m - 1 - lead) as u32);
        if rem < count {
            let mut x = vec![0u64; n];
            x[others[lead]] = 1;
            for t in (lead + 1..m).rev() {
                x[others[t]] = rem % p;
                rem /= p;
            }
            return x;
        }
        rem -= count;
    }
    unreachable!("index beyond the hyperplane")
}

/// Brute-force filter of P^n(F_p); the oracle for `curve_points`.
pub fn curve_points_brute(f: &MultiPoly) -> Vec<ProjPoint> {
    let mut v: Vec<ProjPoint> = projective_points(f.field(), f.nvars()).filter(|pt| f.vanishes_at(pt)).collect();
    v.sort();
    v
}

/// F_p-points of the hypersurface f = 0 on `count` random lines.
pub fn sample_hypersurface<R: Rng>(f: &MultiPoly, rng: &mut R, count: usize) -> Vec<ProjPoint> {
    let field = f.field();
    let n = f.nvars();
    let p = field.modulus();
    let mut out = Vec::new();
    for _ in 0..count {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let (Some(pa), Some(pb)) = (ProjPoint::new(field, &a), ProjPoint::new(field, &b)) else {
            continue;
        };
        if pa == pb || f.vanishes_at(&pa) {
            continue;
        }
        let taylor = taylor_along(f, pb.coords());
        let u = line_poly(field, &taylor, pa.coords());
        for r in u.roots() {
            let c: Vec<u64> = (0..n).map(|i| field.add(pa.coords()[i], field.mul(r, pb.coords()[i]))).collect();
            if let Some(pt) = ProjPoint::new(field, &c) {
                out.push(pt);
            }
        }
        if f.vanishes_at(&pb) {
            out.push(pb);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;

    fn curve(s: &str, p: u64) -> MultiPoly {
        MultiPoly::parse(s, &Vars::p2(), Fp::new(p).unwrap(), true).unwrap()
    }

    #[test]
    fn conic_has_p_plus_one_points() {
        let f = curve("u*v - w^2", 7);
        assert_eq!(curve_points(&f).len(), 8);
        assert_eq!(curve_points(&f), curve_points_brute(&f));
    }

    #[test]
    fn line_and_empty_conic() {
        assert_eq!(curve_points(&curve("u", 13)).len(), 14);
        let pts = curve_points(&curve("u^2 + v^2", 7));
        assert_eq!(pts, vec![ProjPoint::from_signed(Fp::new(7).unwrap(), &[0, 0, 1]).unwrap()]);
    }

    #[test]
    fn taylor_expansion_matches_substitution() {
        let f = curve("u^3 + 2*u*v*w - w^3 + 5*v^2*w", 101);
        let t = taylor_along(&f, &[1, 2, 3]);
        let field = f.field();
        let x = [4u64, 7, 9];
        for l in 0..5u64 {
            let pt: Vec<u64> = (0..3).map(|i| field.add(x[i], field.mul(l, [1, 2, 3][i]))).collect();
            let direct = f.eval(&pt);
            let series = line_poly(field, &t, &x).eval(l);
            assert_eq!(direct, series);
        }
    }

    #[test]
    fn surface_samples_lie_on_surface() {
        use rand::SeedableRng;
        let f = MultiPoly::parse("S^3 + T^3 + U^3 - V^3", &Vars::p3(), Fp::new(10007).unwrap(), true).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let pts = sample_hypersurface(&f, &mut rng, 20);
        assert!(!pts.is_empty());
        assert!(pts.iter().all(|p| f.vanishes_at(p)));
    }
}
