//! Elimination by resultants and Hilbert functions: common zeros of plane
//! forms, finiteness in P^3, intersection multiplicities, tangent cones.

use rand::Rng;
use serde::Serialize;

use crate::gf::Fp;
use crate::linalg::{rank_of_rows, Matrix};
use crate::poly::{monomials_of_degree, Monomial, MultiPoly, ProjPoint, Vars};
use crate::univariate::{sylvester_resultant, sylvester_resultant_poly, UniPoly};

/// A binary form stored through its chart y = 1 together with its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub chart: UniPoly,
    pub degree: usize,
}

impl BinaryForm {
    pub fn is_zero(&self) -> bool {
        self.chart.is_zero()
    }

    /// Multiplicity of the root (1:0).
    pub fn infinity_multiplicity(&self) -> usize {
        self.chart.degree().map_or(self.degree, |d| self.degree - d)
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let g = self.chart.gcd(&self.chart.derivative());
        self.infinity_multiplicity() <= 1 && g.degree() == Some(0)
    }

    /// Multiplicity of the finite root x = a.
    pub fn multiplicity_at(&self, a: u64) -> usize {
        let lin = UniPoly::linear_root(self.chart.field(), a);
        let mut h = self.chart.clone();
        let mut m = 0;
        while !h.is_zero() && lin.divides(&h) {
            h = h.divrem(&lin).0;
            m += 1;
        }
        m
    }

    /// Remove the factor (x - a)^m.
    pub fn deflate(&self, a: u64, m: usize) -> BinaryForm {
        let lin = UniPoly::linear_root(self.chart.field(), a);
        let mut h = self.chart.clone();
        for _ in 0..m {
            h = h.divrem(&lin).0;
        }
        BinaryForm { chart: h, degree: self.degree - m }
    }
}

/// Univariate polynomial in variable `k` of a form after fixing the others.
pub fn specialize(f: &MultiPoly, k: usize, values: &[u64]) -> UniPoly {
    let field = f.field();
    let d = f.total_degree().unwrap_or(0);
    let mut c = vec![0u64; d + 1];
    for (m, &coef) in f.terms() {
        let mut v = coef;
        for (i, &e) in m.0[..f.nvars()].iter().enumerate() {
            if i != k {
                v = field.mul(v, field.pow(values[i], e as u64));
            }
        }
        let e = m.0[k] as usize;
        c[e] = field.add(c[e], v);
    }
    UniPoly::new(field, c)
}

/// Coefficients of z^k in f(x, 1, z) as polynomials in x.
fn coefficients_in_last(f: &MultiPoly) -> Vec<UniPoly> {
    let field = f.field();
    let d = f.total_degree().unwrap_or(0);
    let mut c = vec![vec![0u64; d + 1]; d + 1];
    for (m, &coef) in f.terms() {
        let (ex, ez) = (m.0[0] as usize, m.0[2] as usize);
        c[ez][ex] = field.add(c[ez][ex], coef);
    }
    c.into_iter().map(|v| UniPoly::new(field, v)).collect()
}

/// Res_z of two ternary forms as a binary form in the first two variables,
/// computed by evaluation at x = 0, 1, ... with y = 1 and interpolation, or
/// over F_p[x] directly when F_p is too small to interpolate.
pub fn resultant_last(f: &MultiPoly, g: &MultiPoly) -> BinaryForm {
    let field = f.field();
    let (d, e) = (f.total_degree().unwrap_or(0), g.total_degree().unwrap_or(0));
    let n = d * e;
    if n as u64 >= field.modulus() {
        let chart = sylvester_resultant_poly(&coefficients_in_last(f), d, &coefficients_in_last(g), e);
        return BinaryForm { chart, degree: n };
    }
    let xs: Vec<u64> = (0..=n as u64).collect();
    let ys: Vec<u64> = xs
        .iter()
        .map(|&a| sylvester_resultant(&specialize(f, 2, &[a, 1, 0]), d, &specialize(g, 2, &[a, 1, 0]), e))
        .collect();
    BinaryForm { chart: UniPoly::interpolate(field, &xs, &ys), degree: n }
}

pub fn random_form<R: Rng>(field: Fp, vars: &Vars, d: usize, rng: &mut R) -> MultiPoly {
    let monos = monomials_of_degree(vars.len(), d);
    let c: Vec<u64> = monos.iter().map(|_| rng.gen_range(0..field.modulus())).collect();
    MultiPoly::from_coeff_vector(field, vars, &monos, &c)
}

/// A random invertible linear substitution X_old = G X_new, as images.
pub fn random_change<R: Rng>(field: Fp, vars: &Vars, rng: &mut R) -> (Vec<MultiPoly>, Matrix) {
    let n = vars.len();
    loop {
        let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..field.modulus())).collect()).collect();
        let g = Matrix::from_rows(field, rows.clone());
        if g.det() != 0 {
            let images = rows.iter().map(|r| MultiPoly::linear(field, vars, r)).collect();
            return (images, g);
        }
    }
}

fn apply(g: &Matrix, pt: &ProjPoint) -> ProjPoint {
    ProjPoint::new(g.field(), &g.mul_vec(pt.coords())).expect("invertible change")
}

/// Common zeros of plane forms over the algebraic closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneZeros {
    /// All common zeros; each is F_p-rational.
    Points(Vec<ProjPoint>),
    /// Candidate zeros not defined over F_p could not be excluded.
    NotRational { candidates: usize },
    /// The forms share a curve.
    Infinite,
}

fn univariate_gcd_roots(polys: &[UniPoly]) -> Option<(Vec<u64>, bool)> {
    let mut g = UniPoly::zero(polys[0].field());
    for p in polys {
        g = g.gcd(p);
    }
    if g.is_zero() {
        return None;
    }
    let r = g.roots();
    let rational = g.squarefree_part().degree() == Some(r.len());
    Some((r, rational))
}

fn zeros_once<R: Rng>(forms: &[MultiPoly], rng: &mut R) -> PlaneZeros {
    let field = forms[0].field();
    let vars = forms[0].vars().clone();
    let (images, gmat) = random_change(field, &vars, rng);
    let fs: Vec<MultiPoly> = forms
        .iter()
        .map(|f| f.substitute_linear(&images).expect("linear images"))
        .filter(|f| !f.is_zero())
        .collect();
    if fs.is_empty() {
        return PlaneZeros::Infinite;
    }
    if fs.iter().any(|f| f.total_degree() == Some(0)) {
        return PlaneZeros::Points(vec![]);
    }
    let degs: Vec<usize> = fs.iter().map(|f| f.total_degree().unwrap()).collect();
    let dmin = *degs.iter().min().unwrap();
    let dmax = *degs.iter().max().unwrap();
    let p = field.modulus();
    let low = fs
        .iter()
        .zip(&degs)
        .filter(|(_, &d)| d == dmin)
        .fold(MultiPoly::zero(field, &vars), |acc, (f, _)| acc.add(&f.scale(rng.gen_range(1..p))));
    let combo = |rng: &mut R| {
        fs.iter().zip(&degs).fold(MultiPoly::zero(field, &vars), |acc, (f, &d)| {
            acc.add(&f.mul(&random_form(field, &vars, dmax - d, rng)))
        })
    };
    let g2 = combo(rng);
    let g3 = combo(rng);
    if low.is_zero() || g2.is_zero() {
        return PlaneZeros::NotRational { candidates: 0 };
    }
    let r12 = resultant_last(&low, &g2);
    if r12.is_zero() {
        return PlaneZeros::Infinite;
    }
    let cand = if fs.len() > 1 && !g3.is_zero() {
        let r13 = resultant_last(&low, &g3);
        if r13.is_zero() { r12.chart.clone() } else { r12.chart.gcd(&r13.chart) }
    } else {
        r12.chart.clone()
    };
    let mut pts = Vec::new();
    let mut roots = cand.roots();
    let unexplained = cand.squarefree_part().degree().unwrap_or(0) - roots.len();
    if unexplained > 0 {
        return PlaneZeros::NotRational { candidates: unexplained };
    }
    roots.sort();
    for x0 in roots {
        let polys: Vec<UniPoly> = fs.iter().map(|f| specialize(f, 2, &[x0, 1, 0])).collect();
        match univariate_gcd_roots(&polys) {
            None => return PlaneZeros::Infinite,
            Some((_, false)) => return PlaneZeros::NotRational { candidates: 1 },
            Some((zs, true)) => pts.extend(zs.into_iter().map(|z| ProjPoint::new(field, &[x0, 1, z]).unwrap())),
        }
    }
    // the line y = 0 and its point (0:0:1)
    let polys: Vec<UniPoly> = fs.iter().map(|f| specialize(f, 2, &[1, 0, 0])).collect();
    match univariate_gcd_roots(&polys) {
        None => return PlaneZeros::Infinite,
        Some((_, false)) => return PlaneZeros::NotRational { candidates: 1 },
        Some((zs, true)) => pts.extend(zs.into_iter().map(|z| ProjPoint::new(field, &[1, 0, z]).unwrap())),
    }
    let top = ProjPoint::new(field, &[0, 0, 1]).unwrap();
    if fs.iter().all(|f| f.vanishes_at(&top)) {
        pts.push(top);
    }
    let mut out: Vec<ProjPoint> = pts.iter().map(|pt| apply(&gmat, pt)).collect();
    out.sort();
    out.dedup();
    PlaneZeros::Points(out)
}

/// Common zeros of forms on P^2, exact over the closure when the answer is
/// F_p-rational. Random coordinates are redrawn up to `attempts` times to
/// shed spurious candidates.
pub fn plane_common_zeros<R: Rng>(forms: &[MultiPoly], rng: &mut R, attempts: usize) -> PlaneZeros {
    assert!(!forms.is_empty() && forms[0].nvars() == 3, "forms on P^2 expected");
    let mut last = PlaneZeros::NotRational { candidates: 0 };
    for _ in 0..attempts.max(1) {
        last = zeros_once(forms, rng);
        if matches!(last, PlaneZeros::Points(_)) {
            return last;
        }
    }
    last
}

/// Outcome of the plane-section test for finiteness in P^3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Finiteness {
    /// A plane missing the common zeros: every positive-dimensional set
    /// would meet it.
    Certified { plane: [u64; 4] },
    /// Every tried plane met the common zeros.
    NotCertified { witnesses: Vec<ProjPoint> },
}

/// Certify that forms on P^3 have finitely many common zeros.
pub fn finiteness_p3<R: Rng>(forms: &[MultiPoly], rng: &mut R, planes: usize) -> Finiteness {
    let field = forms[0].field();
    let p2 = Vars::p2();
    let mut witnesses = Vec::new();
    for _ in 0..planes.max(1) {
        // a plane given as the image of a rank-3 map P^2 -> P^3
        let rows: Vec<Vec<u64>> = (0..4).map(|_| (0..3).map(|_| rng.gen_range(0..field.modulus())).collect()).collect();
        if Matrix::from_rows(field, rows.clone()).rank() < 3 {
            continue;
        }
        let images: Vec<MultiPoly> = rows.iter().map(|r| MultiPoly::linear(field, &p2, r)).collect();
        let restricted: Vec<MultiPoly> =
            forms.iter().map(|f| f.substitute_linear(&images).expect("linear images")).collect();
        match plane_common_zeros(&restricted, rng, 3) {
            PlaneZeros::Points(pts) if pts.is_empty() => {
                // the plane's equation: kernel of the transpose
                let t: Vec<Vec<u64>> = (0..3).map(|j| (0..4).map(|i| rows[i][j]).collect()).collect();
                let k = Matrix::from_rows(field, t).kernel();
                let plane = [k[0][0], k[0][1], k[0][2], k[0][3]];
                return Finiteness::Certified { plane };
            }
            PlaneZeros::Points(pts) => {
                witnesses.extend(pts.iter().map(|pt| {
                    let c: Vec<u64> = rows
                        .iter()
                        .map(|r| (0..3).fold(0, |a, j| field.add(a, field.mul(r[j], pt.coords()[j]))))
                        .collect();
                    ProjPoint::new(field, &c).unwrap()
                }));
            }
            _ => {}
        }
    }
    witnesses.sort();
    witnesses.dedup();
    Finiteness::NotCertified { witnesses }
}

/// dim_k (R/I)_d for the ideal generated by `forms`.
pub fn hilbert_value(forms: &[MultiPoly], d: usize) -> usize {
    let field = forms[0].field();
    let n = forms[0].nvars();
    let cols = monomials_of_degree(n, d);
    let index: std::collections::HashMap<Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for f in forms {
        let Some(df) = f.total_degree() else { continue };
        if df > d {
            continue;
        }
        for mult in monomials_of_degree(n, d - df) {
            let mut row = vec![0u64; cols.len()];
            for (m, &c) in f.terms() {
                row[index[&m.mul(&mult)]] = c;
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return cols.len();
    }
    cols.len() - rank_of_rows(field, rows)
}

/// Degree from which the Hilbert function of a finite scheme cut out by the
/// forms equals its length: sum of (d_i - 1) over the n+1 largest degrees, plus 1.
pub fn macaulay_bound(forms: &[MultiPoly]) -> usize {
    let n = forms[0].nvars();
    let mut degs: Vec<usize> = forms.iter().filter_map(|f| f.total_degree()).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    degs.iter().take(n).map(|d| d.saturating_sub(1)).sum::<usize>() + 1
}

/// Multiplicity and tangent cone of a plane form at a point: the lowest
/// nonzero part of f(P + s*u + t*w) as a binary form in (s:t).
pub fn tangent_cone(f: &MultiPoly, pt: &ProjPoint) -> (usize, BinaryForm) {
    let field = f.field();
    let c = pt.coords();
    let k = (0..3).find(|&i| c[i] != 0).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let rst = Vars::new(&["r", "s", "t"]).unwrap();
    let images: Vec<MultiPoly> = (0..3)
        .map(|i| {
            let mut row = [c[i], 0, 0];
            if i == others[0] {
                row[1] = 1;
            }
            if i == others[1] {
                row[2] = 1;
            }
            MultiPoly::linear(field, &rst, &row)
        })
        .collect();
    let g = f.substitute_linear(&images).expect("linear images");
    let d = g.total_degree().unwrap_or(0);
    let top_r = g.terms().map(|(m, _)| m.0[0]).max().unwrap_or(0) as usize;
    let m = d - top_r;
    let mut chart = vec![0u64; m + 1];
    for (mono, &coef) in g.terms() {
        if mono.0[0] as usize == top_r {
            chart[mono.0[1] as usize] = field.add(chart[mono.0[1] as usize], coef);
        }
    }
    (m, BinaryForm { chart: UniPoly::new(field, chart), degree: m })
}

/// Ordinary m-fold point: m distinct tangent lines.
pub fn is_ordinary(f: &MultiPoly, pt: &ProjPoint) -> (usize, bool) {
    let (m, cone) = tangent_cone(f, pt);
    (m, m == 0 || cone.is_squarefree())
}

/// Intersection of two plane curves seen through a generic projection.
#[derive(Debug, Clone)]
pub struct Projection {
    pub change: Matrix,
    pub inverse: Matrix,
    pub resultant: BinaryForm,
}

impl Projection {
    /// x-coordinate (with y = 1) of a point in the new coordinates.
    pub fn x_of(&self, pt: &ProjPoint) -> Option<u64> {
        let f = pt.field();
        let v = self.inverse.mul_vec(pt.coords());
        (v[1] != 0).then(|| f.div(v[0], v[1]).unwrap())
    }
}

fn invert(m: &Matrix) -> Matrix {
    let f = m.field();
    let n = m.rows();
    let cols: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let e: Vec<u64> = (0..n).map(|i| u64::from(i == j)).collect();
            match m.solve(&e) {
                crate::linalg::Solution::Consistent { particular, .. } => particular,
                crate::linalg::Solution::Inconsistent { .. } => panic!("singular change"),
            }
        })
        .collect();
    Matrix::from_rows(f, (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

/// Res_z(f, g) after a random change making (0:0:1) lie on neither curve and
/// every listed point project to a distinct finite x.
pub fn generic_projection<R: Rng>(
    curves: &[&MultiPoly],
    pairs: &[(usize, usize)],
    points: &[ProjPoint],
    rng: &mut R,
) -> (Matrix, Matrix, Vec<BinaryForm>) {
    let field = curves[0].field();
    let vars = curves[0].vars().clone();
    loop {
        let (images, gmat) = random_change(field, &vars, rng);
        let inv = invert(&gmat);
        let moved: Vec<MultiPoly> = curves.iter().map(|c| c.substitute_linear(&images).unwrap()).collect();
        let top = ProjPoint::new(field, &[0, 0, 1]).unwrap();
        if moved.iter().any(|c| c.vanishes_at(&top)) {
            continue;
        }
        let xs: Vec<Option<u64>> = points
            .iter()
            .map(|pt| {
                let v = inv.mul_vec(pt.coords());
                (v[1] != 0).then(|| field.div(v[0], v[1]).unwrap())
            })
            .collect();
        if xs.iter().any(|x| x.is_none()) {
            continue;
        }
        let mut sorted: Vec<u64> = xs.iter().map(|x| x.unwrap()).collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let res = pairs.iter().map(|&(i, j)| resultant_last(&moved[i], &moved[j])).collect();
        return (gmat, inv, res);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn plane(s: &str, p: u64) -> MultiPoly {
        MultiPoly::parse(s, &Vars::p2(), fp(p), true).unwrap()
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = fp(101);
        let u = UniPoly::new(f, vec![3, 0, 7, 1, 99]);
        let xs: Vec<u64> = (10..15).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| u.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(f, &xs, &ys), u);
    }

    #[test]
    fn resultant_of_lines_and_conics() {
        // u - w and v - w meet at (1:1:1): resultant vanishes at x = 1 only
        let r = resultant_last(&plane("u - w", 101), &plane("v - w", 101));
        assert_eq!(r.degree, 1);
        assert_eq!(r.chart.roots(), vec![1]);
        // two conics meet in four points counted with multiplicity
        let r = resultant_last(&plane("u^2 + v^2 - w^2", 101), &plane("u*v - w^2 + 3*v^2", 101));
        assert_eq!(r.degree, 4);
    }

    #[test]
    fn small_field_resultant_matches_interpolation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = fp(101);
        for (d, e) in [(3, 4), (5, 6), (2, 7)] {
            let a = random_form(f, &Vars::p2(), d, &mut rng);
            let b = random_form(f, &Vars::p2(), e, &mut rng);
            let direct = sylvester_resultant_poly(&coefficients_in_last(&a), d, &coefficients_in_last(&b), e);
            assert_eq!(resultant_last(&a, &b).chart, direct);
        }
        // over F_7 a line and a sextic still give a degree 6 resultant
        let r = resultant_last(&plane("u - w", 7), &plane("v^6 - w^6", 7));
        assert_eq!(r.degree, 6);
        assert_eq!(r.chart.eval(1), 0);
    }

    #[test]
    fn common_zeros_of_three_conics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // the conics through (1:0:0), (0:1:0), (0:0:1), (1:1:1)
        let forms = [plane("u*v - u*w", 10007), plane("v*w - u*w", 10007), plane("u*v - v*w", 10007)];
        let z = plane_common_zeros(&forms[..2], &mut rng, 3);
        let f = fp(10007);
        let expect: Vec<ProjPoint> = [[0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 1, 1]]
            .iter()
            .map(|c| ProjPoint::new(f, c).unwrap())
            .collect();
        let PlaneZeros::Points(mut pts) = z else { panic!("{z:?}") };
        pts.sort();
        let mut e = expect.clone();
        e.sort();
        assert_eq!(pts, e);
        assert_eq!(plane_common_zeros(&[plane("u^2 + v^2 + w^2", 10007)], &mut rng, 2), PlaneZeros::Infinite);
        let empty = plane_common_zeros(&[plane("u", 10007), plane("v", 10007), plane("w", 10007)], &mut rng, 2);
        assert_eq!(empty, PlaneZeros::Points(vec![]));
    }

    #[test]
    fn irrational_zeros_are_flagged() {
        // u^2 + v^2 = w = 0 is a pair of points conjugate over F_103
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z = plane_common_zeros(&[plane("u^2 + v^2", 103), plane("w", 103)], &mut rng, 2);
        assert!(matches!(z, PlaneZeros::NotRational { .. }), "{z:?}");
    }

    #[test]
    fn finiteness_of_points_and_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = fp(10007);
        let p3 = Vars::p3();
        let parse = |s: &str| MultiPoly::parse(s, &p3, f, true).unwrap();
        // three generic quadrics: 8 points
        let pts = [parse("S^2 - T*U"), parse("T^2 - U*V + S*V"), parse("U^2 - S*T + V^2")];
        assert!(matches!(finiteness_p3(&pts, &mut rng, 4), Finiteness::Certified { .. }));
        // two quadrics: a curve
        assert!(matches!(finiteness_p3(&pts[..2], &mut rng, 3), Finiteness::NotCertified { .. }));
    }

    #[test]
    fn hilbert_function_counts_points() {
        let f = fp(10007);
        let p3 = Vars::p3();
        let parse = |s: &str| MultiPoly::parse(s, &p3, f, true).unwrap();
        let ci = [parse("S^2 - T*U"), parse("T^2 - U*V + S*V"), parse("U^2 - S*T + V^2")];
        let d = macaulay_bound(&ci);
        assert_eq!(hilbert_value(&ci, d), 8);
        // the four partials of the Cayley cubic define its four nodes
        let cay = crate::cayley::cayley_bundle(f).discriminant();
        let grad = cay.gradient();
        assert_eq!(hilbert_value(&grad, macaulay_bound(&grad)), 4);
    }

    #[test]
    fn tangent_cones_of_nodes_and_cusps() {
        let f = fp(101);
        let origin = ProjPoint::new(f, &[0, 0, 1]).unwrap();
        assert_eq!(is_ordinary(&plane("u^2*w - v^2*w + u^3", 101), &origin), (2, true));
        assert_eq!(is_ordinary(&plane("u^2*w - v^3", 101), &origin), (2, false));
        assert_eq!(is_ordinary(&plane("u^3 - v^3", 101), &origin), (3, true));
        assert_eq!(tangent_cone(&plane("u - w", 101), &ProjPoint::new(f, &[1, 5, 1]).unwrap()).0, 1);
    }
}
