//! The seven-item checklist for the assembled bundle N.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::c666::{Example, TYPES};
use super::certs::{
    cayley_node_of, meets_lines_only_at_base_points, rationality_certificate, split_witnesses,
    zeros_on_line_only_at_ends, SplitWitnesses,
};
use super::report::{CheckRecord, Evidence, Status, VerificationReport};
use crate::brauer::{graph_from_witnesses, ComponentWitness, CurveWitness, DiscriminantGraph, HResult, Hypotheses};
use crate::cayley::{type_to_linear_conditions, BASE_PAIRS};
use crate::conic::{projective_points, FiberType};
use crate::elim::{finiteness_p3, hilbert_value, macaulay_bound, plane_common_zeros, Finiteness, PlaneZeros};
use crate::linalg::Matrix;
use crate::points::curve_points;
use crate::poly::{MultiPoly, ProjPoint};

#[derive(Debug, Clone)]
pub struct ChecklistOptions {
    pub seed: u64,
    /// Random lines tried per surface when looking for splitting witnesses.
    pub witness_budget: usize,
    /// Random planes tried by the finiteness test.
    pub planes: usize,
    /// Exhaustive P^3 scans are run only at or below this prime.
    pub scan_bound: u64,
}

impl Default for ChecklistOptions {
    fn default() -> Self {
        ChecklistOptions { seed: 0, witness_budget: 200, planes: 4, scan_bound: 101 }
    }
}

pub(crate) fn rng_for(opts: &ChecklistOptions, item: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ item)
}

/// Cayley cubic det A.
pub fn cayley_cubic(ex: &Example) -> MultiPoly {
    ex.a.discriminant()
}

pub(crate) fn phi_image(ex: &Example, pt: &ProjPoint) -> Option<ProjPoint> {
    let c: Vec<u64> = ex.phi().iter().map(|f| f.eval(pt.coords())).collect();
    ProjPoint::new(pt.field(), &c)
}

/// Images in P^3 of the F_p-points of D_i off the base points.
pub fn rational_points_of_component(ex: &Example, i: usize) -> Vec<ProjPoint> {
    curve_points(&ex.instance.curves[i]).iter().filter_map(|pt| phi_image(ex, pt)).collect()
}

/// Singular points of X6: finiteness, and the comparison with q = r = t = 0.
#[derive(Debug, Clone, Serialize)]
pub struct X6Singularities {
    pub finiteness: Finiteness,
    /// Length of the scheme cut out by the partials of X6.
    pub jacobian_length: Option<usize>,
    pub hilbert_degree: usize,
    /// Whether q = r = t = 0 is a reduced set of 2*3*4 points.
    pub qrt_reduced: bool,
    /// Every singular point is one of the points q = r = t = 0 and a node.
    pub nodes_are_qrt: bool,
    /// Singular F_p-points found by exhaustive scan at small primes.
    pub scan: Option<Vec<ProjPoint>>,
}

pub fn x6_singularities(ex: &Example, opts: &ChecklistOptions) -> X6Singularities {
    let mut rng = rng_for(opts, 101);
    let grad = ex.x6.gradient();
    let finiteness = finiteness_p3(&grad, &mut rng, opts.planes);
    let finite = matches!(finiteness, Finiteness::Certified { .. });
    let hd = macaulay_bound(&grad);
    let jacobian_length = finite.then(|| hilbert_value(&grad, hd));
    // reducedness of q = r = t = 0: no point where the Jacobian drops rank
    let (q, r, t) = (&ex.q_bar, &ex.r_bar, &ex.t_bar);
    let qrt = [q.clone(), r.clone(), t.clone()];
    let qrt_finite = matches!(finiteness_p3(&qrt, &mut rng, opts.planes), Finiteness::Certified { .. });
    let jac: Vec<Vec<MultiPoly>> = qrt.iter().map(|f| f.gradient()).collect();
    let minors: Vec<MultiPoly> = (0..4)
        .map(|skip| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            det3(&jac, &cols)
        })
        .collect();
    let field = ex.x6.field();
    let combo = minors.iter().fold(MultiPoly::zero(field, ex.x6.vars()), |acc, m| {
        acc.add(&m.scale(rand::Rng::gen_range(&mut rng, 1..field.modulus())))
    });
    let mut with_j = qrt.to_vec();
    with_j.push(combo);
    let qrt_reduced = qrt_finite && hilbert_value(&with_j, macaulay_bound(&with_j)) == 0;
    let expected = 2 * 3 * 4;
    let nodes_are_qrt = qrt_reduced && jacobian_length == Some(expected);
    let scan = (field.modulus() <= opts.scan_bound).then(|| {
        projective_points(field, 4).filter(|pt| grad.iter().all(|g| g.vanishes_at(pt))).collect()
    });
    X6Singularities { finiteness, jacobian_length, hilbert_degree: hd, qrt_reduced, nodes_are_qrt, scan }
}

fn det3(jac: &[Vec<MultiPoly>], cols: &[usize]) -> MultiPoly {
    let e = |i: usize, j: usize| &jac[i][cols[j]];
    let t1 = e(0, 0).mul(&e(1, 1).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 1))));
    let t2 = e(0, 1).mul(&e(1, 0).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 0))));
    let t3 = e(0, 2).mul(&e(1, 0).mul(e(2, 1)).sub(&e(1, 1).mul(e(2, 0))));
    t1.sub(&t2).add(&t3)
}

fn item1(ex: &Example, sing: &X6Singularities) -> CheckRecord {
    let p = ex.x6.field().modulus();
    let finite = matches!(sing.finiteness, Finiteness::Certified { .. });
    let scan_ok = sing.scan.as_ref().map_or(true, |s| s.len() <= sing.jacobian_length.unwrap_or(usize::MAX));
    CheckRecord::new("1 singular locus of X6 finite", p, Evidence::Certificate)
        .with_status(if !finite {
            Status::Fail
        } else if !scan_ok {
            Status::Fail
        } else {
            Status::Pass
        })
        .summary(format!(
            "plane section {}; Jacobian scheme length {:?}; nodes = {{q = r = t = 0}}: {}",
            if finite { "misses the singular locus" } else { "meets the singular locus" },
            sing.jacobian_length,
            sing.nodes_are_qrt
        ))
        .witnesses(sing)
}

/// Common zeros of D_i and the pulled-back forms lie at base points only.
fn pulled_back_zeros_at_base_points(
    ex: &Example,
    i: usize,
    forms: &[MultiPoly],
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let phi = ex.phi();
    let mut plane = vec![ex.instance.curves[i].clone()];
    for f in forms {
        plane.push(f.substitute(&phi).map_err(|e| e.to_string())?);
    }
    match plane_common_zeros(&plane, rng, 4) {
        PlaneZeros::Points(pts) => {
            let base = ex.instance.cfg.base_points();
            match pts.iter().find(|pt| !base.contains(pt)) {
                Some(pt) => Err(format!("common zero at {pt}")),
                None => Ok(()),
            }
        }
        other => Err(format!("{other:?}")),
    }
}

/// Exceptional lines met by D_i, as pairs of Cayley nodes.
pub(crate) fn exceptional_lines(ex: &Example, i: usize) -> Vec<(ProjPoint, ProjPoint)> {
    let cfg = &ex.instance.cfg;
    let class = crate::cayley::CurveClass::from_type(TYPES[i]);
    BASE_PAIRS
        .iter()
        .filter(|&&(a, b)| class.beta_of(a, b) > 0)
        .map(|&(a, b)| (cayley_node_of(cfg, a), cayley_node_of(cfg, b)))
        .collect()
}

fn item2(ex: &Example, opts: &ChecklistOptions) -> CheckRecord {
    let mut rng = rng_for(opts, 2);
    let p = ex.x6.field().modulus();
    let grad = ex.x6.gradient();
    let mut failures = Vec::new();
    let mut sampled = 0usize;
    for i in 0..3 {
        if let Err(e) = pulled_back_zeros_at_base_points(ex, i, &grad, &mut rng) {
            failures.push(format!("D{}: {e}", i + 1));
        }
        for (na, nb) in exceptional_lines(ex, i) {
            if !zeros_on_line_only_at_ends(&grad, &na, &nb) {
                failures.push(format!("D{}: X6 singular on the line {na} {nb}", i + 1));
            }
        }
        if meets_lines_only_at_base_points(&ex.instance.curves[i], TYPES[i], &ex.instance.cfg).contains(&false) {
            failures.push(format!("D{} reaches a node of the Cayley cubic", i + 1));
        }
        for pt in rational_points_of_component(ex, i) {
            sampled += 1;
            if grad.iter().all(|g| g.vanishes_at(&pt)) {
                failures.push(format!("singular F_p-point {pt} on D{}", i + 1));
            }
        }
    }
    CheckRecord::new("2 X6 smooth along D", p, Evidence::Certificate)
        .status(failures.is_empty())
        .summary(format!(
            "partials pulled back to each D_i vanish only at base points; {sampled} F_p-points of D sampled"
        ))
        .witnesses(json!({ "failures": failures, "sampled_points": sampled }))
}

fn item3(ex: &Example, opts: &ChecklistOptions) -> CheckRecord {
    let mut rng = rng_for(opts, 3);
    let cay = cayley_cubic(ex);
    let p = cay.field().modulus();
    let grad = cay.gradient();
    let mut failures = Vec::new();
    let mut sampled = 0usize;
    for i in 0..3 {
        let met = meets_lines_only_at_base_points(&ex.instance.curves[i], TYPES[i], &ex.instance.cfg);
        if met.contains(&false) {
            failures.push(format!("D{} meets a contracted line off the base points: {met:?}", i + 1));
        }
        if let Err(e) = pulled_back_zeros_at_base_points(ex, i, &grad, &mut rng) {
            failures.push(format!("D{}: {e}", i + 1));
        }
        for pt in rational_points_of_component(ex, i) {
            sampled += 1;
            if grad.iter().all(|g| g.vanishes_at(&pt)) {
                failures.push(format!("singular F_p-point {pt} on D{}", i + 1));
            }
        }
    }
    CheckRecord::new("3 Cayley cubic smooth along D", p, Evidence::Certificate)
        .status(failures.is_empty())
        .summary(format!("each D_i meets the contracted lines only at base points, transversally; {sampled} F_p-points sampled"))
        .witnesses(json!({ "failures": failures, "sampled_points": sampled }))
}

fn item4(ex: &Example, opts: &ChecklistOptions) -> CheckRecord {
    let mut rng = rng_for(opts, 4);
    let p = ex.n.field().modulus();
    let fin = finiteness_p3(&ex.n.minors2(), &mut rng, opts.planes);
    CheckRecord::new("4 rank 1 locus of N finite", p, Evidence::Certificate)
        .status(matches!(fin, Finiteness::Certified { .. }))
        .summary("a random plane misses every common zero of the 2x2 minors")
        .witnesses(fin)
}

/// Rank-0 locus emptiness from the linear lower-right block.
pub fn rank0_certificate(n: &crate::conic::GradedConicBundle) -> (bool, Option<ProjPoint>) {
    let field = n.field();
    let lin = [n.entry(1, 1), n.entry(1, 2), n.entry(2, 2)];
    if lin.iter().any(|f| f.total_degree().is_some_and(|d| d != 1)) {
        return (false, None);
    }
    let rows: Vec<Vec<u64>> = lin
        .iter()
        .map(|f| (0..4).map(|k| f.coeff(&crate::poly::Monomial::var(k, 1))).collect())
        .collect();
    let ker = Matrix::from_rows(field, rows).kernel();
    match ker.len() {
        0 => (true, None),
        1 => {
            let pt = ProjPoint::new(field, &ker[0]).unwrap();
            let others = [n.entry(0, 0), n.entry(0, 1), n.entry(0, 2)];
            (others.iter().any(|f| !f.vanishes_at(&pt)), Some(pt))
        }
        _ => (false, None),
    }
}

fn item5(ex: &Example) -> CheckRecord {
    let (ok, pt) = rank0_certificate(&ex.n);
    CheckRecord::new("5 rank 0 locus of N empty", ex.n.field().modulus(), Evidence::Certificate)
        .status(ok)
        .summary("the linear entries vanish at a single point where another entry does not")
        .witnesses(json!({ "linear_block_zero": pt }))
}

fn item6(ex: &Example, opts: &ChecklistOptions) -> CheckRecord {
    let mut rng = rng_for(opts, 6);
    let cfg = &ex.instance.cfg;
    let mut certs = Vec::new();
    let mut ok = true;
    for i in 0..3 {
        let nodes = ex.instance.own_nodes(i);
        match rationality_certificate(&ex.instance.curves[i], TYPES[i], cfg, &nodes, &mut rng) {
            Ok(c) => {
                ok &= c.genus == 0 && c.nodes_off_exceptional_lines;
                certs.push(json!({ "curve": format!("D{}", i + 1), "certificate": c }));
            }
            Err(e) => {
                ok = false;
                certs.push(json!({ "curve": format!("D{}", i + 1), "error": e.to_string() }));
            }
        }
    }
    CheckRecord::new("6 components D_i irreducible and rational", cfg.field().modulus(), Evidence::Certificate)
        .status(ok)
        .summary("arithmetic genus 2 minus two ordinary nodes; all singular points accounted for; splittings excluded")
        .witnesses(certs)
}

/// Splitting witnesses over the Cayley cubic and X6.
pub fn cover_witnesses(ex: &Example, opts: &ChecklistOptions) -> Vec<(String, Result<SplitWitnesses, String>)> {
    let mut rng = rng_for(opts, 7);
    let cay = cayley_cubic(ex);
    [("cayley", cay), ("x6", ex.x6.clone())]
        .into_iter()
        .map(|(name, s)| {
            (name.to_string(), split_witnesses(&ex.n, &s, &mut rng, opts.witness_budget).map_err(|e| e.to_string()))
        })
        .collect()
}

fn item7(ex: &Example, opts: &ChecklistOptions) -> CheckRecord {
    let w = cover_witnesses(ex, opts);
    let ok = w.iter().all(|(_, r)| r.is_ok());
    let inconclusive = w.iter().any(|(_, r)| r.as_ref().is_err_and(|e| e.contains("no splitting witness")));
    let status = if ok {
        Status::Pass
    } else if inconclusive {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    let wit: Vec<_> = w
        .iter()
        .map(|(n, r)| match r {
            Ok(s) => json!({ "surface": n, "split": s.split_point, "nonsplit": s.nonsplit_point, "sampled": s.sampled }),
            Err(e) => json!({ "surface": n, "error": e }),
        })
        .collect();
    CheckRecord::new("7 double covers nontrivial", ex.n.field().modulus(), Evidence::Certificate)
        .with_status(status)
        .summary("a split and a non-split rank-2 fiber over rational points of each component")
        .witnesses(wit)
}

/// Run the seven checks; items are independent and run in parallel.
pub fn verify_checklist(ex: &Example, opts: &ChecklistOptions) -> (VerificationReport, X6Singularities) {
    let sing = x6_singularities(ex, opts);
    let checks: Vec<CheckRecord> = (1..=7u8)
        .into_par_iter()
        .map(|k| match k {
            1 => item1(ex, &sing),
            2 => item2(ex, opts),
            3 => item3(ex, opts),
            4 => item4(ex, opts),
            5 => item5(ex),
            6 => item6(ex, opts),
            _ => item7(ex, opts),
        })
        .collect();
    (VerificationReport::new(checks), sing)
}

/// Witnesses along the curves D_i: generic rank, splitting and transversality
/// at rational points.
pub fn curve_witnesses(ex: &Example) -> Vec<CurveWitness> {
    let cay = cayley_cubic(ex);
    let (gc, gx) = (cay.gradient(), ex.x6.gradient());
    let nodes = ex.instance.contact_nodes();
    let phi_nodes: Vec<ProjPoint> = nodes.iter().filter_map(|pt| phi_image(ex, pt)).collect();
    (0..3)
        .map(|i| {
            let pts: Vec<ProjPoint> =
                rational_points_of_component(ex, i).into_iter().filter(|pt| !phi_nodes.contains(pt)).collect();
            let types: Vec<FiberType> = pts.iter().filter_map(|pt| ex.n.classify_fiber(pt).ok()).collect();
            let generic_rank2 = types.iter().any(|t| t.rank() == 2);
            // geometrically reducible iff the split type is constant along D_i
            // (all nonsplit: a twist by a nonsquare constant)
            let mut rank2 = types.iter().filter(|t| t.rank() == 2);
            let first = rank2.clone().next().copied();
            let constant = rank2.all(|&t| Some(t) == first);
            let transversal = pts.iter().any(|pt| {
                let a: Vec<u64> = gc.iter().map(|g| g.eval(pt.coords())).collect();
                let b: Vec<u64> = gx.iter().map(|g| g.eval(pt.coords())).collect();
                Matrix::from_rows(pt.field(), vec![a, b]).rank() == 2
            });
            CurveWitness {
                i: 0,
                j: 1,
                name: format!("D{}", i + 1),
                generic_rank2: Some(generic_rank2),
                cover_reducible: Some(generic_rank2 && constant),
                transversal: Some(transversal),
            }
        })
        .collect()
}

/// Discriminant graph of the example assembled from the geometric witnesses.
pub fn example_graph(ex: &Example, opts: &ChecklistOptions) -> Result<DiscriminantGraph, String> {
    let comps: Vec<ComponentWitness> = cover_witnesses(ex, opts)
        .into_iter()
        .map(|(name, r)| ComponentWitness {
            name,
            split_point: r.as_ref().ok().map(|s| s.split_point.clone()),
            nonsplit_point: r.as_ref().ok().map(|s| s.nonsplit_point.clone()),
        })
        .collect();
    let curves = curve_witnesses(ex);
    graph_from_witnesses(&comps, &curves, Hypotheses::all()).map_err(|e| e.to_string())
}

pub fn example_brauer(ex: &Example, opts: &ChecklistOptions) -> Result<HResult, String> {
    example_graph(ex, opts)?.compute_h().map_err(|e| e.to_string())
}

/// Base-point conditions of each D_i, for reporting.
pub fn type_table(ex: &Example) -> Vec<(String, usize, Vec<(String, usize)>)> {
    (0..3)
        .map(|i| {
            let tc = type_to_linear_conditions(TYPES[i], &ex.instance.cfg);
            (format!("D{}", i + 1), tc.degree, tc.points.into_iter().map(|(n, _, m)| (n, m)).collect())
        })
        .collect()
}
