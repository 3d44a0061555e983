//! Certificates for the component curves: rationality by singularity
//! accounting, behaviour along the exceptional lines, splitting witnesses.

use rand::Rng;
use serde::Serialize;

use super::PipelineError;
use crate::cayley::{class_invariants, type_to_linear_conditions, LineConfig};
use crate::conic::{FiberType, GradedConicBundle};
use crate::construct::{line_points, Condition, LinearSystem};
use crate::elim::{is_ordinary, plane_common_zeros, PlaneZeros};
use crate::points::sample_hypersurface;
use crate::poly::{MultiPoly, ProjPoint};
use crate::univariate::UniPoly;

/// Image of a generic point of the line L_i: the node it is contracted to.
pub fn cayley_node_of(cfg: &LineConfig, i: usize) -> ProjPoint {
    let field = cfg.field();
    let (p, q) = line_points(&cfg.lines()[i]);
    let phi = cfg.parametrization();
    for t in 1..field.modulus() {
        let c: Vec<u64> = (0..3).map(|k| field.add(p.coords()[k], field.mul(t, q.coords()[k]))).collect();
        let pt = ProjPoint::new(field, &c).unwrap();
        if cfg.base_points().contains(&pt) {
            continue;
        }
        let img: Vec<u64> = phi.iter().map(|f| f.eval(pt.coords())).collect();
        if let Some(n) = ProjPoint::new(field, &img) {
            return n;
        }
    }
    unreachable!("a line has points off the base points")
}

/// Common roots of forms restricted to the line through `a` and `b`, as
/// chart values l (point l*a + b), plus whether `a` itself is a common root.
pub fn common_roots_on_line(forms: &[MultiPoly], a: &ProjPoint, b: &ProjPoint) -> (UniPoly, bool) {
    let field = a.field();
    let mut g = UniPoly::zero(field);
    let mut at_a = true;
    for f in forms {
        let r = f.restrict_to_line(a, b).expect("distinct points");
        let u = r.binary_to_univariate();
        let d = r.total_degree().unwrap_or(0);
        if !r.is_zero() && u.degree() == Some(d) {
            at_a = false;
        }
        g = g.gcd(&u);
    }
    (g, at_a)
}

/// Whether every common zero of the forms on the line n_a n_b is n_a or n_b.
pub fn zeros_on_line_only_at_ends(forms: &[MultiPoly], a: &ProjPoint, b: &ProjPoint) -> bool {
    let (g, _) = common_roots_on_line(forms, a, b);
    if g.is_zero() {
        return false;
    }
    // only the root l = 0, i.e. the point b
    let d = g.degree().unwrap();
    g.coeffs()[..d].iter().all(|&c| c == 0)
}

/// D_i meets L_a only at the base points, with intersection multiplicity
/// exactly the base-point multiplicity: no tangency and no further points.
pub fn meets_lines_only_at_base_points(d: &MultiPoly, b: [u32; 3], cfg: &LineConfig) -> Vec<bool> {
    let tc = type_to_linear_conditions(b, cfg);
    (0..4)
        .map(|a| {
            let line = &cfg.lines()[a];
            let (p, q) = line_points(line);
            let Ok(h) = d.restrict_to_line(&p, &q) else { return false };
            let field = cfg.field();
            let mut expect = MultiPoly::constant(field, h.vars(), 1);
            for (_, pt, m) in &tc.points {
                if !line.vanishes_at(pt) {
                    continue;
                }
                // (l0:m0) with pt = l0*p + m0*q
                let lm = chart_coords(&p, &q, pt);
                let lin = MultiPoly::linear(field, h.vars(), &[lm.1, field.neg(lm.0)]);
                expect = expect.mul(&lin.pow(*m));
            }
            expect.total_degree() == h.total_degree() && h.proportional(&expect).is_some()
        })
        .collect()
}

fn chart_coords(p: &ProjPoint, q: &ProjPoint, pt: &ProjPoint) -> (u64, u64) {
    let f = p.field();
    // solve pt ~ l*p + m*q using two coordinates where p, q are independent
    let (pc, qc, x) = (p.coords(), q.coords(), pt.coords());
    for i in 0..pc.len() {
        for j in i + 1..pc.len() {
            let det = f.sub(f.mul(pc[i], qc[j]), f.mul(pc[j], qc[i]));
            if det != 0 {
                let l = f.div(f.sub(f.mul(x[i], qc[j]), f.mul(x[j], qc[i])), det).unwrap();
                let m = f.div(f.sub(f.mul(pc[i], x[j]), f.mul(pc[j], x[i])), det).unwrap();
                return (l, m);
            }
        }
    }
    unreachable!("distinct points")
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeRecord {
    pub point: ProjPoint,
    pub multiplicity: usize,
    pub ordinary: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RationalityCertificate {
    pub arithmetic_genus: i64,
    pub genus: i64,
    pub nodes: Vec<NodeRecord>,
    pub base_points: Vec<NodeRecord>,
    /// Singular points found by elimination, all accounted for.
    pub singular_points: Vec<ProjPoint>,
    /// Numerically possible splittings, each excluded by a linear system.
    pub splittings_excluded: usize,
    pub nodes_off_exceptional_lines: bool,
}

/// Candidate splits D = C1 + C2 compatible with Bezout at ordinary points.
fn bezout_splits(alpha: usize, mults: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for a1 in 1..=alpha / 2 {
        let a2 = alpha - a1;
        let mut cur = vec![0usize; mults.len()];
        fn rec(
            k: usize,
            a1: usize,
            a2: usize,
            mults: &[usize],
            cur: &mut Vec<usize>,
            out: &mut Vec<(usize, Vec<usize>)>,
        ) {
            if k == mults.len() {
                let inter: usize = mults.iter().zip(cur.iter()).map(|(&m, &m1)| m1 * (m - m1)).sum();
                let g1 = (a1 as i64 - 1) * (a1 as i64 - 2) / 2
                    - cur.iter().map(|&m| (m * m.saturating_sub(1) / 2) as i64).sum::<i64>();
                if inter == a1 * a2 && g1 >= 0 {
                    out.push((a1, cur.clone()));
                }
                return;
            }
            let m = mults[k];
            for m1 in m.saturating_sub(a2)..=m.min(a1) {
                cur[k] = m1;
                rec(k + 1, a1, a2, mults, cur, out);
            }
        }
        rec(0, a1, a2, mults, &mut cur, &mut out);
    }
    out
}

/// Geometric genus of a plane curve of type `b` with given extra nodes,
/// certified by accounting for every singular point.
pub fn rationality_certificate<R: Rng>(
    d: &MultiPoly,
    b: [u32; 3],
    cfg: &LineConfig,
    nodes: &[ProjPoint],
    rng: &mut R,
) -> Result<RationalityCertificate, PipelineError> {
    let inv = class_invariants(b);
    let tc = type_to_linear_conditions(b, cfg);
    let mut base_points = Vec::new();
    for (_, pt, m) in &tc.points {
        let (mult, ordinary) = is_ordinary(d, pt);
        if mult != *m || !ordinary {
            return Err(PipelineError::NonOrdinarySingularity(format!(
                "base point {pt}: multiplicity {mult}, expected an ordinary {m}-fold point"
            )));
        }
        base_points.push(NodeRecord { point: pt.clone(), multiplicity: mult, ordinary });
    }
    let mut node_records = Vec::new();
    for pt in nodes {
        let (mult, ordinary) = is_ordinary(d, pt);
        if mult != 2 || !ordinary {
            return Err(PipelineError::NonOrdinarySingularity(format!("{pt}: multiplicity {mult}, ordinary {ordinary}")));
        }
        node_records.push(NodeRecord { point: pt.clone(), multiplicity: mult, ordinary });
    }
    let singular = match plane_common_zeros(&d.gradient(), rng, 4) {
        PlaneZeros::Points(pts) => pts,
        other => return Err(PipelineError::UnaccountedSingularity(format!("singular locus: {other:?}"))),
    };
    let mut known: Vec<&ProjPoint> = nodes.iter().collect();
    known.extend(tc.points.iter().filter(|(_, _, m)| *m >= 2).map(|(_, pt, _)| pt));
    if let Some(extra) = singular.iter().find(|pt| !known.contains(pt)) {
        return Err(PipelineError::UnaccountedSingularity(format!("extra singular point {extra}")));
    }
    if known.iter().any(|pt| !singular.contains(pt)) {
        return Err(PipelineError::UnaccountedSingularity("a prescribed singular point is smooth".into()));
    }
    // exclude reducibility: every Bezout-compatible split needs a curve C1
    // with the split multiplicities dividing D
    let mut pts: Vec<ProjPoint> = tc.points.iter().map(|(_, pt, _)| pt.clone()).collect();
    let mut mults: Vec<usize> = tc.points.iter().map(|(_, _, m)| *m).collect();
    pts.extend(nodes.iter().cloned());
    mults.extend(nodes.iter().map(|_| 2));
    let splits = bezout_splits(tc.degree, &mults);
    for (a1, m1) in &splits {
        let mut sys = LinearSystem::new(cfg.field(), *a1);
        for (pt, &m) in pts.iter().zip(m1) {
            if m > 0 {
                sys = sys.with(Condition::Multiplicity(pt.clone(), m));
            }
        }
        let basis = sys.solve()?;
        match basis.len() {
            0 => {}
            1 if !basis[0].divides(d) => {}
            n => {
                return Err(PipelineError::UnaccountedSingularity(format!(
                    "cannot exclude a component of degree {a1} ({n}-dimensional system)"
                )))
            }
        }
    }
    let delta = node_records.len() as i64;
    let nodes_off = nodes.iter().all(|pt| cfg.lines().iter().all(|l| !l.vanishes_at(pt)));
    Ok(RationalityCertificate {
        arithmetic_genus: inv.arithmetic_genus,
        genus: inv.arithmetic_genus - delta,
        nodes: node_records,
        base_points,
        singular_points: singular,
        splittings_excluded: splits.len(),
        nodes_off_exceptional_lines: nodes_off,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitWitnesses {
    pub split_point: ProjPoint,
    pub nonsplit_point: ProjPoint,
    pub sampled: usize,
}

/// Rational points of S with split and with non-split rank-2 fibers.
pub fn split_witnesses<R: Rng>(
    m: &GradedConicBundle,
    s: &MultiPoly,
    rng: &mut R,
    budget: usize,
) -> Result<SplitWitnesses, PipelineError> {
    if !s.divides(&m.discriminant()) {
        return Err(PipelineError::IncidenceFailure("surface is not a component of the discriminant".into()));
    }
    let (mut split, mut nonsplit, mut sampled) = (None, None, 0);
    for _ in 0..budget {
        for pt in sample_hypersurface(s, rng, 1) {
            sampled += 1;
            match m.classify_fiber(&pt)? {
                FiberType::SplitPair if split.is_none() => split = Some(pt),
                FiberType::NonsplitPair if nonsplit.is_none() => nonsplit = Some(pt),
                _ => {}
            }
        }
        if let (Some(a), Some(b)) = (&split, &nonsplit) {
            return Ok(SplitWitnesses { split_point: a.clone(), nonsplit_point: b.clone(), sampled });
        }
    }
    Err(PipelineError::WitnessNotFound(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fp;
    use crate::poly::Vars;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bezout_splits_of_a_nodal_cubic_are_empty() {
        // an irreducible nodal cubic: no split a1 a2 = m1 m2 with one node
        assert!(bezout_splits(3, &[2]).is_empty());
        // a conic with a double point is numerically a line pair
        assert_eq!(bezout_splits(2, &[2]), vec![(1, vec![1])]);
        assert!(bezout_splits(2, &[1, 1]).is_empty());
    }

    #[test]
    fn split_witnesses_need_a_component() {
        let f = Fp::new(41).unwrap();
        let v = Vars::p3();
        let m = GradedConicBundle::parse_upper(&["1", "0", "0", "-1", "0", "S*T - U^2"], &v, f).unwrap();
        let s = MultiPoly::parse("S*T - U^2", &v, f, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // diag(1, -1, q): -(1)(-1) = 1 is always a square, so nothing nonsplit
        assert!(matches!(split_witnesses(&m, &s, &mut rng, 30), Err(PipelineError::WitnessNotFound(30))));
        assert!(matches!(split_witnesses(&m, &s, &mut rng, 0), Err(PipelineError::WitnessNotFound(0))));
        let other = MultiPoly::parse("S - T", &v, f, true).unwrap();
        assert!(split_witnesses(&m, &other, &mut rng, 3).is_err());
    }
}
