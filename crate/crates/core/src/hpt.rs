//! The Hassett-Pirutka-Tschinkel conic bundle over P^3 as executable ground
//! truth: construction over any F_p containing sqrt 2 and exact verification
//! of its discriminant, nodes, contact structure and Brauer data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::brauer::{graph_from_witnesses, ComponentWitness, CurveWitness, DiscriminantGraph, HResult, Hypotheses};
use crate::conic::{projective_points, FiberType, GradedConicBundle};
use crate::gf::{Fp, GfError};
use crate::localforms::{thm_ch0_hypotheses, two_surface_witnesses, Ch0Data, PlaneCurve};
use crate::poly::{MultiPoly, ProjPoint, Vars};
use crate::report::{CheckRecord, Evidence, Status, VerificationReport};

#[derive(Debug, Error)]
pub enum HptError {
    #[error("2 is not a square modulo {0} (need p = 1 or 7 mod 8)")]
    NoSqrt2(u64),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// The six curves of D+ ∩ D-: conics M~1..3 then lines L~1..3.
pub const CURVE_NAMES: [&str; 6] = ["M1", "M2", "M3", "L1", "L2", "L3"];

#[derive(Debug, Clone)]
pub struct HptInstance {
    pub field: Fp,
    /// The square root of 2 in [1, (p-1)/2].
    pub root2: u64,
    pub vars: Vars,
    pub bundle: GradedConicBundle,
    pub d_plus: MultiPoly,
    pub d_minus: MultiPoly,
    /// The divisor of bidegree (2,2) in P^2 x P^3, coordinates (S,T,U,V,X,Y,Z).
    pub divisor: MultiPoly,
    /// V_old = V_new / sqrt 2 ties the divisor to the bundle.
    pub rescaling: [u64; 4],
    /// The degree 8 cover P^3 -> P^3.
    pub cover: [MultiPoly; 4],
    /// The linear Cayley bundle in X0..X3 and its discriminant F.
    pub cayley: GradedConicBundle,
    pub cayley_cubic: MultiPoly,
    pub cayley_nodes: [ProjPoint; 4],
    /// Branch planes G0..G3.
    pub planes: [MultiPoly; 4],
    /// Lines L_i and M_i on F as pairs of planes.
    pub lines_l: [[MultiPoly; 2]; 3],
    pub lines_m: [[MultiPoly; 2]; 3],
    pub nodes_plus: Vec<ProjPoint>,
    pub nodes_minus: Vec<ProjPoint>,
    pub sigma: Vec<ProjPoint>,
    pub curves: Vec<PlaneCurve>,
}

fn pt(field: Fp, c: [u64; 4]) -> ProjPoint {
    ProjPoint::new(field, &c).expect("nonzero point")
}

pub fn build(p: u64) -> Result<HptInstance, HptError> {
    let field = Fp::new(p)?;
    if p == 2 || !matches!(p % 8, 1 | 7) {
        return Err(HptError::NoSqrt2(p));
    }
    let r = field.sqrt(2)?;
    let root2 = r.min(p - r);
    let v = Vars::p3();
    let parse = |s: &str| MultiPoly::parse(s, &v, field, true).expect("fixture polynomial");
    let bundle = GradedConicBundle::parse_upper(
        &["V^2", "U^2 - V^2", "T^2 - V^2", "V^2", "S^2 - V^2", "V^2"],
        &v,
        field,
    )
    .expect("fixture matrix");
    let cubic = parse("2*V^3 - S^2*V - T^2*V - U^2*V");
    let stu = parse("S*T*U").scale(root2);
    let (d_plus, d_minus) = (cubic.add(&stu), cubic.sub(&stu));

    let v7 = Vars::new(&["S", "T", "U", "V", "X", "Y", "Z"]).unwrap();
    let divisor = MultiPoly::parse(
        "Y*Z*S^2 + X*Z*T^2 + X*Y*U^2 + X^2*V^2 + Y^2*V^2 + Z^2*V^2 - 2*X*Y*V^2 - 2*X*Z*V^2 - 2*Y*Z*V^2",
        &v7,
        field,
        true,
    )
    .expect("fixture divisor");
    let inv2 = field.inv(root2).unwrap();

    let cover = [parse("V^2"), parse("U^2 - V^2"), parse("T^2 - V^2"), parse("S^2 - V^2")];
    let xv = Vars::cayley();
    let xparse = |s: &str| MultiPoly::parse(s, &xv, field, true).expect("fixture polynomial");
    let cayley = GradedConicBundle::parse_upper(&["X0", "X1", "X2", "X0", "X3", "X0"], &xv, field).unwrap();
    let cayley_cubic = cayley.discriminant();
    let m1 = p - 1;
    let cayley_nodes = [pt(field, [1, 1, 1, 1]), pt(field, [1, m1, m1, 1]), pt(field, [1, 1, m1, m1]), pt(field, [1, m1, 1, m1])];
    let planes = [xparse("X0"), xparse("X0 + X1"), xparse("X0 + X2"), xparse("X0 + X3")];
    let lines_l = [
        [xparse("X0"), xparse("X1")],
        [xparse("X0"), xparse("X2")],
        [xparse("X0"), xparse("X3")],
    ];
    let lines_m = [
        [xparse("X0 + X1"), xparse("X2 + X3")],
        [xparse("X0 + X2"), xparse("X1 + X3")],
        [xparse("X0 + X3"), xparse("X1 + X2")],
    ];

    let h = inv2;
    let nh = field.neg(h);
    let mut nodes_plus = Vec::new();
    let mut nodes_minus = Vec::new();
    for signs in [[1, 1, 1], [1, m1, m1], [m1, 1, m1], [m1, m1, 1]] {
        nodes_plus.push(pt(field, [signs[0], signs[1], signs[2], h]));
        nodes_minus.push(pt(field, [signs[0], signs[1], signs[2], nh]));
    }
    let nr = field.neg(root2);
    let sigma = vec![
        pt(field, [root2, 0, 0, 1]),
        pt(field, [nr, 0, 0, 1]),
        pt(field, [0, root2, 0, 1]),
        pt(field, [0, nr, 0, 1]),
        pt(field, [0, 0, root2, 1]),
        pt(field, [0, 0, nr, 1]),
    ];
    let curves = vec![
        PlaneCurve::new("M1", parse("U"), parse("S^2 + T^2 - 2*V^2")),
        PlaneCurve::new("M2", parse("T"), parse("S^2 + U^2 - 2*V^2")),
        PlaneCurve::new("M3", parse("S"), parse("T^2 + U^2 - 2*V^2")),
        PlaneCurve::new("L1", parse("U"), parse("V")),
        PlaneCurve::new("L2", parse("T"), parse("V")),
        PlaneCurve::new("L3", parse("S"), parse("V")),
    ];
    Ok(HptInstance {
        field,
        root2,
        vars: v,
        bundle,
        d_plus,
        d_minus,
        divisor,
        rescaling: [1, 1, 1, inv2],
        cover,
        cayley,
        cayley_cubic,
        cayley_nodes,
        planes,
        lines_l,
        lines_m,
        nodes_plus,
        nodes_minus,
        sigma,
        curves,
    })
}

impl HptInstance {
    /// The 14 points where the bundle has rank 1.
    pub fn special_points(&self) -> Vec<ProjPoint> {
        let mut v: Vec<ProjPoint> = self.nodes_plus.iter().chain(&self.nodes_minus).chain(&self.sigma).cloned().collect();
        v.sort();
        v
    }

    /// The sextic discriminant as printed (before the sign).
    pub fn sextic(&self) -> MultiPoly {
        MultiPoly::parse(
            "4*V^6 - 4*S^2*V^4 - 4*T^2*V^4 - 4*U^2*V^4 + S^4*V^2 + T^4*V^2 + U^4*V^2 + 2*S^2*T^2*V^2 + 2*S^2*U^2*V^2 + 2*T^2*U^2*V^2 - 2*S^2*T^2*U^2",
            &self.vars,
            self.field,
            true,
        )
        .expect("fixture sextic")
    }

    pub fn ch0_data(&self) -> Ch0Data {
        Ch0Data {
            m: self.bundle.clone(),
            x1: self.d_plus.clone(),
            x2: self.d_minus.clone(),
            nodes1: self.nodes_plus.clone(),
            nodes2: self.nodes_minus.clone(),
            curves: self.curves.clone(),
        }
    }
}

/// Options of `verify_all`.
#[derive(Debug, Clone)]
pub struct HptOptions {
    /// Exhaustive P^3 scan only at or below this prime.
    pub exhaustive_bound: u64,
    /// Random points tried per component for splitting witnesses.
    pub witness_budget: usize,
}

impl Default for HptOptions {
    fn default() -> Self {
        HptOptions { exhaustive_bound: 101, witness_budget: 400 }
    }
}

fn signed(field: Fp, c: u64) -> i64 {
    field.to_signed(c)
}

fn rescaled_divisor(inst: &HptInstance) -> CheckRecord {
    let f = inst.field;
    let v7 = inst.divisor.vars().clone();
    let x = |i: usize| MultiPoly::var(f, &v7, i);
    let lift: Vec<MultiPoly> = (0..4).map(|i| x(i).scale(inst.rescaling[i])).collect();
    let mut q = MultiPoly::zero(f, &v7);
    for a in 0..3 {
        for b in 0..3 {
            let e = inst.bundle.entry(a, b).substitute_linear(&(0..4).map(x).collect::<Vec<_>>()).unwrap();
            q = q.add(&e.mul(&x(4 + a)).mul(&x(4 + b)));
        }
    }
    let d = inst.divisor.substitute_linear(&lift_full(&lift, &v7, f)).unwrap();
    let c = q.proportional(&d);
    CheckRecord::new("0 matrix is the divisor after V -> sqrt2 V", f.modulus(), Evidence::Exact)
        .status(c.is_some())
        .summary("(X,Y,Z) M (X,Y,Z)^t equals the rescaled divisor up to a unit")
        .witnesses(json!({ "scalar": c.map(|c| signed(f, c)), "v_old_over_v_new": signed(f, inst.rescaling[3]) }))
}

fn lift_full(first: &[MultiPoly], v7: &Vars, f: Fp) -> Vec<MultiPoly> {
    let mut out = first.to_vec();
    out.extend((4..7).map(|i| MultiPoly::var(f, v7, i)));
    out
}

fn determinant(inst: &HptInstance) -> CheckRecord {
    let f = inst.field;
    let det = inst.bundle.discriminant();
    let prod = inst.d_plus.mul(&inst.d_minus);
    let c = det.proportional(&prod);
    let sextic_ok = prod == inst.sextic();
    let mut w = json!({ "scalar": c.map(|c| signed(f, c)), "product_is_printed_sextic": sextic_ok });
    if c.is_none() {
        w["residual"] = json!(det.add(&prod).to_string());
    }
    CheckRecord::new("a det M = unit * D+ D-", f.modulus(), Evidence::Exact)
        .status(c.is_some() && sextic_ok)
        .summary("exact expansion of the determinant against the product of the two cubics")
        .witnesses(w)
}

fn pullback(inst: &HptInstance) -> CheckRecord {
    let pulled = inst.cayley.substitute(&inst.cover).expect("degree 2 images");
    let mut mismatches = Vec::new();
    for a in 0..3 {
        for b in a..3 {
            if pulled.entry(a, b) != inst.bundle.entry(a, b) {
                mismatches.push(format!("({a},{b}): {} vs {}", pulled.entry(a, b), inst.bundle.entry(a, b)));
            }
        }
    }
    CheckRecord::new("b pullback of the Cayley bundle", inst.field.modulus(), Evidence::Exact)
        .status(mismatches.is_empty())
        .summary("Cayley matrix composed with the degree 8 cover, compared entrywise")
        .witnesses(json!({ "mismatches": mismatches }))
}

fn nodes(inst: &HptInstance) -> CheckRecord {
    let mut bad = Vec::new();
    for (s, list) in [(&inst.d_plus, &inst.nodes_plus), (&inst.d_minus, &inst.nodes_minus)] {
        let grad = s.gradient();
        for pt in list {
            let singular = s.vanishes_at(pt) && grad.iter().all(|g| g.vanishes_at(pt));
            let rank = inst.bundle.rank_at_point(pt).ok();
            if !singular || rank != Some(1) {
                bad.push(json!({ "point": pt, "singular": singular, "rank": rank }));
            }
        }
    }
    CheckRecord::new("c nodes of D+ and D- have rank 1", inst.field.modulus(), Evidence::Exact)
        .status(bad.is_empty())
        .summary("each listed point is a singular point of its component with rank 1")
        .witnesses(json!({ "failures": bad }))
}

fn sigma(inst: &HptInstance) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    for pt in &inst.sigma {
        let on_both = inst.d_plus.vanishes_at(pt) && inst.d_minus.vanishes_at(pt);
        if !on_both || inst.bundle.rank_at_point(pt).ok() != Some(1) {
            bad.push(pt.to_string());
        }
    }
    // pairwise intersections of the conics
    let mut meets = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            let other = &inst.curves[b];
            match inst.curves[a].common_zeros(&[other.plane.clone(), other.equation.clone()], &mut rng) {
                crate::elim::PlaneZeros::Points(pts) => meets.extend(pts),
                z => bad.push(format!("{} {}: {z:?}", CURVE_NAMES[a], CURVE_NAMES[b])),
            }
        }
    }
    meets.sort();
    let mut expected = inst.sigma.clone();
    expected.sort();
    let coincide = meets == expected;
    CheckRecord::new("d the six points of Sigma have rank 1", inst.field.modulus(), Evidence::Exact)
        .status(bad.is_empty() && coincide)
        .summary("Sigma lies on D+ and D-, has rank 1, and is the set of pairwise intersections of the conics")
        .witnesses(json!({ "failures": bad, "conic_intersections": meets }))
}

fn curves_on_both(inst: &HptInstance) -> CheckRecord {
    let mut bad = Vec::new();
    let mut degree = 0;
    for c in &inst.curves {
        let (f, images) = c.restricted();
        degree += c.degree();
        for s in [&inst.d_plus, &inst.d_minus] {
            let r = s.substitute_linear(&images).unwrap();
            if !r.is_zero() && !f.divides(&r) {
                bad.push(c.name.clone());
            }
        }
    }
    CheckRecord::new("e six curves on D+ and D-, degree 9", inst.field.modulus(), Evidence::Exact)
        .status(bad.is_empty() && degree == 9)
        .summary("each curve equation divides the restrictions of D+ and D- to its plane")
        .witnesses(json!({ "total_degree": degree, "failures": bad }))
}

pub fn contact_identities(inst: &HptInstance) -> CheckRecord {
    let f = &inst.cayley_cubic;
    let mut rows = Vec::new();
    let mut ok = true;
    // G0 ∩ F = L
    let (r0, im0) = f.restrict_to_plane(&inst.planes[0]).unwrap();
    let tri = inst.lines_l.iter().fold(MultiPoly::constant(inst.field, &Vars::cayley(), 1), |acc, l| acc.mul(&l[1]));
    let tri0 = tri.substitute_linear(&im0).unwrap();
    let c0 = r0.proportional(&tri0);
    ok &= c0.is_some();
    rows.push(json!({ "plane": "G0", "factors": "L1 L2 L3", "scalar": c0.map(|c| signed(inst.field, c)) }));
    // G_i ∩ F = 2 M_i + L_i
    for i in 0..3 {
        let (r, im) = f.restrict_to_plane(&inst.planes[i + 1]).unwrap();
        let m = inst.lines_m[i][1].substitute_linear(&im).unwrap();
        let l = inst.lines_l[i][0].substitute_linear(&im).unwrap();
        let quotient = r.exact_div(&m.mul(&m)).ok();
        let c = quotient.as_ref().and_then(|q| q.proportional(&l));
        ok &= c.is_some();
        rows.push(json!({
            "plane": format!("G{}", i + 1),
            "factors": format!("M{}^2 L{}", i + 1, i + 1),
            "scalar": c.map(|c| signed(inst.field, c)),
        }));
    }
    // lines and nodes on F, nu_0 off G
    let on_f = inst.lines_l.iter().chain(&inst.lines_m).all(|pair| {
        let (r, im) = f.restrict_to_plane(&pair[0]).unwrap();
        let g = pair[1].substitute_linear(&im).unwrap();
        g.divides(&r)
    });
    let grad = f.gradient();
    let nodes_ok = inst.cayley_nodes.iter().all(|pt| grad.iter().all(|g| g.vanishes_at(pt)));
    let nu0_off = inst.planes.iter().all(|g| !g.vanishes_at(&inst.cayley_nodes[0]));
    ok &= on_f && nodes_ok && nu0_off;
    CheckRecord::new("f contact identities of F with G", inst.field.modulus(), Evidence::Exact)
        .status(ok)
        .summary("F restricted to G0 is the L triangle, to G_i is M_i^2 L_i, after exact division")
        .witnesses(json!({ "restrictions": rows, "lines_on_f": on_f, "nodes_singular": nodes_ok, "nu0_off_g": nu0_off }))
}

/// Fiber types over the F_p-points of a curve, off the special points.
fn fiber_census(inst: &HptInstance, c: &PlaneCurve) -> (Vec<ProjPoint>, Vec<FiberType>) {
    let special = inst.special_points();
    let pts: Vec<ProjPoint> = c.points().into_iter().filter(|pt| special.binary_search(pt).is_err()).collect();
    let types = pts.par_iter().map(|pt| inst.bundle.classify_fiber(pt).expect("P^3 point")).collect();
    (pts, types)
}

fn split_over_lines(inst: &HptInstance) -> CheckRecord {
    let mut rows = Vec::new();
    let mut ok = true;
    for c in &inst.curves[3..] {
        let (_, types) = fiber_census(inst, c);
        let rank2 = types.iter().filter(|t| t.rank() == 2).count();
        let split = types.iter().filter(|&&t| t == FiberType::SplitPair).count();
        ok &= rank2 > 0 && split == rank2;
        rows.push(json!({ "curve": c.name, "rank2_points": rank2, "split": split }));
    }
    CheckRecord::new("g split fibers over the lines L~i", inst.field.modulus(), Evidence::Sampling)
        .status(ok)
        .summary("every rank-2 fiber over an F_p-point of L~1, L~2, L~3 is a pair of rational lines")
        .witnesses(rows)
}

fn rank_census(inst: &HptInstance, opts: &HptOptions) -> CheckRecord {
    let p = inst.field.modulus();
    let rec = CheckRecord::new("h exhaustive rank census", p, Evidence::Exact);
    if p > opts.exhaustive_bound {
        return rec
            .with_status(Status::Skipped)
            .summary(format!("p = {p} above the exhaustive bound {}", opts.exhaustive_bound));
    }
    let rank1 = inst.bundle.rank_locus_scan(1, projective_points(inst.field, 4));
    let rank0 = inst.bundle.rank_locus_scan(0, projective_points(inst.field, 4));
    let expected = inst.special_points();
    rec.status(rank1 == expected && rank0.is_empty())
        .summary(format!("{} points of rank <= 1 in P^3(F_{p}), none of rank 0", rank1.len()))
        .witnesses(json!({ "count": rank1.len(), "points": rank1, "rank0": rank0.len() }))
}

/// Witnesses for the Brauer graph of the HPT bundle.
pub fn hpt_witnesses(inst: &HptInstance, opts: &HptOptions) -> (Vec<ComponentWitness>, Vec<CurveWitness>) {
    two_surface_witnesses(&inst.ch0_data(), ["D+", "D-"], opts.witness_budget, 0)
}

pub fn hpt_graph(inst: &HptInstance, opts: &HptOptions) -> Result<DiscriminantGraph, String> {
    let (comps, curves) = hpt_witnesses(inst, opts);
    graph_from_witnesses(&comps, &curves, Hypotheses::all()).map_err(|e| e.to_string())
}

pub fn hpt_brauer(inst: &HptInstance, opts: &HptOptions) -> Result<HResult, String> {
    hpt_graph(inst, opts)?.compute_h().map_err(|e| e.to_string())
}

fn brauer(inst: &HptInstance, opts: &HptOptions) -> CheckRecord {
    let rec = CheckRecord::new("i Brauer quotient of order 2", inst.field.modulus(), Evidence::Certificate);
    match hpt_brauer(inst, opts) {
        Ok(h) => rec
            .status(h.order_of_quotient == 2 && h.equality_certified)
            .summary(format!("H has order {}, quotient order {}", h.order_h, h.order_of_quotient))
            .witnesses(h),
        Err(e) => rec.status(false).summary(e),
    }
}

/// Every identity of the fixture, as one report.
pub fn verify_all(inst: &HptInstance, opts: &HptOptions) -> VerificationReport {
    let jobs: Vec<Box<dyn Fn() -> CheckRecord + Sync>> = vec![
        Box::new(|| rescaled_divisor(inst)),
        Box::new(|| determinant(inst)),
        Box::new(|| pullback(inst)),
        Box::new(|| nodes(inst)),
        Box::new(|| sigma(inst)),
        Box::new(|| curves_on_both(inst)),
        Box::new(|| contact_identities(inst)),
        Box::new(|| split_over_lines(inst)),
        Box::new(|| rank_census(inst, opts)),
        Box::new(|| brauer(inst, opts)),
    ];
    VerificationReport::new(jobs.par_iter().map(|f| f()).collect())
}

/// The CH_0 hypotheses with X' = D+, X'' = D-.
pub fn hpt_ch0(inst: &HptInstance) -> VerificationReport {
    thm_ch0_hypotheses(&inst.ch0_data(), 0)
}

/// Serializable summary of the fixture data.
#[derive(Debug, Clone, Serialize)]
pub struct HptSummary {
    pub prime: u64,
    pub root2: u64,
    pub special_points: Vec<ProjPoint>,
}

impl HptInstance {
    pub fn summary(&self) -> HptSummary {
        HptSummary { prime: self.field.modulus(), root2: self.root2, special_points: self.special_points() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_primes() {
        assert!(build(10007).is_ok());
        assert!(build(41).is_ok());
        assert!(matches!(build(5), Err(HptError::NoSqrt2(5))));
        assert!(matches!(build(11), Err(HptError::NoSqrt2(11))));
        assert!(build(15).is_err());
    }

    #[test]
    fn fixture_at_41() {
        let inst = build(41).unwrap();
        let rep = verify_all(&inst, &HptOptions::default());
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.get("h exhaustive rank census").unwrap().witnesses["count"], 14);
    }

    #[test]
    fn fixture_at_10007_skips_the_scan() {
        let inst = build(10007).unwrap();
        let rep = verify_all(&inst, &HptOptions::default());
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.get("h exhaustive rank census").unwrap().status, Status::Skipped);
        assert_eq!(rep.get("a det M = unit * D+ D-").unwrap().witnesses["scalar"], -1);
    }

    #[test]
    fn sabotage_breaks_the_determinant() {
        let mut inst = build(41).unwrap();
        let v = inst.vars.clone();
        inst.bundle = GradedConicBundle::parse_upper(
            &["V^2", "U^2 - V^2", "T^2 - V^2", "V^2", "S^2 - V^2", "-V^2"],
            &v,
            inst.field,
        )
        .unwrap();
        let rep = verify_all(&inst, &HptOptions { exhaustive_bound: 0, ..Default::default() });
        let a = rep.get("a det M = unit * D+ D-").unwrap();
        assert_eq!(a.status, Status::Fail);
        assert!(a.witnesses["residual"].is_string());
    }

    #[test]
    fn ch0_hypotheses_hold() {
        for p in [41, 10007] {
            let inst = build(p).unwrap();
            let rep = hpt_ch0(&inst);
            assert!(rep.passed(), "p = {p}\n{}", rep.to_text());
        }
    }
}
