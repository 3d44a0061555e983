//! Local structure of conic bundles along the discriminant intersection: the
//! three normal-form cases, Hessian ranks of fibers, and the hypotheses of the
//! CH_0 triviality criterion.
//!
//! Local analytic statements are decided through 2-jets at F_p-points: no
//! power series and no blow-ups are computed, only their numerical shadows.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use rayon::prelude::*;

use crate::brauer::{ComponentWitness, CurveWitness};
use crate::conic::{ConicError, FiberType, GradedConicBundle};
use crate::elim::{finiteness_p3, hilbert_value, is_ordinary, macaulay_bound, plane_common_zeros, Finiteness, PlaneZeros};
use crate::linalg::Matrix;
use crate::points::curve_points;
use crate::pipeline::certs::split_witnesses;
use crate::poly::{MultiPoly, ProjPoint};
use crate::report::{CheckRecord, Evidence, VerificationReport};

#[derive(Debug, Error)]
pub enum LocalError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Conic(#[from] ConicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalTag {
    Case1SmoothRank2,
    Case2NodeRank2,
    Case3NodeRank1,
    OffTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalClass {
    pub tag: LocalTag,
    pub rank: usize,
    pub d_smooth: bool,
    /// Rank of the 2x2 tangent cone of D on X' (2 for a node).
    pub tangent_cone_rank: Option<usize>,
    pub reason: Option<String>,
}

/// Affine chart at P: P normalized with a 1 in position k.
fn chart(pt: &ProjPoint) -> (usize, Vec<u64>) {
    let c = pt.coords();
    let k = c.iter().position(|&x| x != 0).unwrap();
    let inv = pt.field().inv(c[k]).unwrap();
    (k, c.iter().map(|&x| pt.field().mul(x, inv)).collect())
}

/// First and second partials of a form, kept for repeated evaluation.
#[derive(Debug, Clone)]
struct Jet {
    grad: Vec<MultiPoly>,
    hess: Vec<Vec<MultiPoly>>,
}

impl Jet {
    fn new(f: &MultiPoly) -> Self {
        let grad = f.gradient();
        let hess = grad.iter().map(|g| g.gradient()).collect();
        Jet { grad, hess }
    }

    /// Gradient in the affine chart dropping coordinate k.
    fn gradient(&self, k: usize, x: &[u64]) -> Vec<u64> {
        (0..self.grad.len()).filter(|&i| i != k).map(|i| self.grad[i].eval(x)).collect()
    }

    fn hessian(&self, k: usize, x: &[u64]) -> Vec<Vec<u64>> {
        let idx: Vec<usize> = (0..self.grad.len()).filter(|&i| i != k).collect();
        idx.iter().map(|&i| idx.iter().map(|&j| self.hess[i][j].eval(x)).collect()).collect()
    }
}

/// Classifier for points of D = X' ∩ X'' with det M = X' X''.
#[derive(Debug, Clone)]
pub struct LocalClassifier<'a> {
    m: &'a GradedConicBundle,
    x1: &'a MultiPoly,
    x2: &'a MultiPoly,
    j1: Jet,
    j2: Jet,
}

impl<'a> LocalClassifier<'a> {
    pub fn new(m: &'a GradedConicBundle, x1: &'a MultiPoly, x2: &'a MultiPoly) -> Result<Self, LocalError> {
        if x1.mul(x2).proportional(&m.discriminant()).is_none() {
            return Err(LocalError::HypothesisViolated("X' X'' is not the discriminant".into()));
        }
        Ok(LocalClassifier { m, x1, x2, j1: Jet::new(x1), j2: Jet::new(x2) })
    }

    pub fn classify(&self, pt: &ProjPoint) -> Result<LocalClass, LocalError> {
        let field = self.m.field();
        if !self.x1.vanishes_at(pt) || !self.x2.vanishes_at(pt) {
            return Err(LocalError::HypothesisViolated(format!("{pt} is not on both components")));
        }
        let (k, x) = chart(pt);
        let g1 = self.j1.gradient(k, &x);
        let g2 = self.j2.gradient(k, &x);
        if g1.iter().all(|&v| v == 0) || g2.iter().all(|&v| v == 0) {
            return Err(LocalError::HypothesisViolated(format!("a component is singular at {pt}")));
        }
        let rank = self.m.rank_at_point(pt)?;
        if rank == 0 {
            return Err(LocalError::HypothesisViolated(format!("rank 0 at {pt}")));
        }
        let independent = Matrix::from_rows(field, vec![g1.clone(), g2.clone()]).rank() == 2;
        if independent {
            let (tag, reason) = if rank == 2 {
                (LocalTag::Case1SmoothRank2, None)
            } else {
                (LocalTag::OffTable, Some("rank 1 at a smooth point of D".to_string()))
            };
            return Ok(LocalClass { tag, rank, d_smooth: true, tangent_cone_rank: None, reason });
        }
        // g2 = lambda g1: h = x2 - lambda x1 is singular at P, and D on X' is
        // cut out by h; its tangent cone is the Hessian of h on T_P X'
        let j = g1.iter().position(|&v| v != 0).unwrap();
        let lambda = field.div(g2[j], g1[j]).unwrap();
        let h1 = self.j1.hessian(k, &x);
        let h2 = self.j2.hessian(k, &x);
        let hh: Vec<Vec<u64>> = h2
            .iter()
            .zip(&h1)
            .map(|(r2, r1)| r2.iter().zip(r1).map(|(&a, &b)| field.sub(a, field.mul(lambda, b))).collect())
            .collect();
        let tangent = Matrix::from_rows(field, vec![g1]).kernel();
        let q: Vec<Vec<u64>> = tangent
            .iter()
            .map(|u| {
                tangent
                    .iter()
                    .map(|w| {
                        let hw: Vec<u64> = hh.iter().map(|row| dot(field, row, w)).collect();
                        dot(field, u, &hw)
                    })
                    .collect()
            })
            .collect();
        let cone_rank = Matrix::from_rows(field, q).rank();
        let (tag, reason) = match (cone_rank, rank) {
            (2, 2) => (LocalTag::Case2NodeRank2, None),
            (2, 1) => (LocalTag::Case3NodeRank1, None),
            _ => (LocalTag::OffTable, Some(format!("tangency of order > 1 (tangent cone rank {cone_rank})"))),
        };
        Ok(LocalClass { tag, rank, d_smooth: false, tangent_cone_rank: Some(cone_rank), reason })
    }
}

/// Classify a point P of D = X' ∩ X'' into the normal-form table.
pub fn classify_d_point(
    m: &GradedConicBundle,
    x1: &MultiPoly,
    x2: &MultiPoly,
    pt: &ProjPoint,
) -> Result<LocalClass, LocalError> {
    LocalClassifier::new(m, x1, x2)?.classify(pt)
}

fn dot(field: crate::gf::Fp, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Rank of the matrix of second partials of F at an affine point.
pub fn hessian_rank(f: &MultiPoly, pt: &[u64]) -> usize {
    let n = f.nvars();
    let rows: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| f.partial(i).partial(j).eval(pt)).collect()).collect();
    Matrix::from_rows(f.field(), rows).rank()
}

/// At a rank-1 point, the three entries of the residual 2x2 block have
/// independent differentials.
pub fn node_smoothness_check(m: &GradedConicBundle, pt: &ProjPoint) -> Result<bool, LocalError> {
    let field = m.field();
    let mp = m.eval_at(pt);
    if mp.rank() != 1 {
        return Err(LocalError::HypothesisViolated(format!("rank {} at {pt}, expected 1", mp.rank())));
    }
    let ker = mp.kernel();
    let (k, x) = chart(pt);
    // d(u^T M w) at P for u, w in the kernel of M(P)
    let entry_grad = |u: &[u64], w: &[u64]| -> Vec<u64> {
        let mut g = vec![0u64; x.len() - 1];
        for a in 0..3 {
            for b in 0..3 {
                let c = field.mul(u[a], w[b]);
                if c == 0 {
                    continue;
                }
                let e = m.entry(a, b);
                for (slot, i) in g.iter_mut().zip((0..4).filter(|&i| i != k)) {
                    *slot = field.add(*slot, field.mul(c, e.partial(i).eval(&x)));
                }
            }
        }
        g
    };
    let rows = vec![entry_grad(&ker[0], &ker[0]), entry_grad(&ker[0], &ker[1]), entry_grad(&ker[1], &ker[1])];
    Ok(Matrix::from_rows(field, rows).rank() == 3)
}

/// A component of D: the curve `equation = 0` inside the plane `plane = 0`.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    pub name: String,
    pub plane: MultiPoly,
    pub equation: MultiPoly,
}

impl PlaneCurve {
    pub fn new(name: &str, plane: MultiPoly, equation: MultiPoly) -> Self {
        PlaneCurve { name: name.into(), plane, equation }
    }

    /// Equation in plane coordinates and the embedding of the plane.
    pub fn restricted(&self) -> (MultiPoly, Vec<MultiPoly>) {
        self.equation.restrict_to_plane(&self.plane).expect("linear plane")
    }

    pub fn degree(&self) -> usize {
        self.restricted().0.homogeneous_degree().unwrap_or(0)
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.plane.vanishes_at(pt) && self.equation.vanishes_at(pt)
    }

    fn embed(images: &[MultiPoly], pt: &ProjPoint) -> ProjPoint {
        let c: Vec<u64> = images.iter().map(|f| f.eval(pt.coords())).collect();
        ProjPoint::new(pt.field(), &c).expect("embedding is injective")
    }

    /// F_p-points of the curve, in P^3.
    pub fn points(&self) -> Vec<ProjPoint> {
        let (f, images) = self.restricted();
        curve_points(&f).iter().map(|pt| Self::embed(&images, pt)).collect()
    }

    /// Common zeros on the curve of the restrictions of `forms`.
    pub fn common_zeros<R: Rng>(&self, forms: &[MultiPoly], rng: &mut R) -> PlaneZeros {
        let (f, images) = self.restricted();
        let mut sys = vec![f];
        for g in forms {
            let r = g.substitute_linear(&images).expect("same ambient space");
            if !r.is_zero() {
                sys.push(r);
            }
        }
        match plane_common_zeros(&sys, rng, 4) {
            PlaneZeros::Points(pts) => PlaneZeros::Points(pts.iter().map(|pt| Self::embed(&images, pt)).collect()),
            other => other,
        }
    }

    /// Singular points of the curve, or an error when some are not rational.
    pub fn singular_points<R: Rng>(&self, rng: &mut R) -> Result<Vec<ProjPoint>, String> {
        let (f, images) = self.restricted();
        match plane_common_zeros(&f.gradient(), rng, 4) {
            PlaneZeros::Points(pts) => Ok(pts.iter().map(|pt| Self::embed(&images, pt)).collect()),
            other => Err(format!("{}: singular locus {other:?}", self.name)),
        }
    }

    fn ordinary_node(&self, pt: &ProjPoint) -> bool {
        let (f, images) = self.restricted();
        // preimage of pt in plane coordinates
        let m = Matrix::from_rows(
            pt.field(),
            (0..4).map(|i| (0..3).map(|j| images[i].coeff(&crate::poly::Monomial::var(j, 1))).collect()).collect(),
        );
        match m.solve(pt.coords()) {
            crate::linalg::Solution::Consistent { particular, .. } => {
                let q = ProjPoint::new(pt.field(), &particular).expect("nonzero");
                is_ordinary(&f, &q) == (2, true)
            }
            _ => false,
        }
    }
}

/// Input of the CH_0 hypothesis checker: the bundle, the two discriminant
/// components with their nodes, and the components of D = X' ∩ X''.
#[derive(Debug, Clone)]
pub struct Ch0Data {
    pub m: GradedConicBundle,
    pub x1: MultiPoly,
    pub x2: MultiPoly,
    pub nodes1: Vec<ProjPoint>,
    pub nodes2: Vec<ProjPoint>,
    pub curves: Vec<PlaneCurve>,
}

/// V(forms) is empty over the algebraic closure.
pub fn empty_zero_set(forms: &[MultiPoly]) -> bool {
    hilbert_value(forms, macaulay_bound(forms)) == 0
}

fn minors3(rows: &[Vec<MultiPoly>]) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    for r in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        for c in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            let e = |i: usize, j: usize| &rows[r[i]][c[j]];
            let t1 = e(0, 0).mul(&e(1, 1).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 1))));
            let t2 = e(0, 1).mul(&e(1, 0).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 0))));
            let t3 = e(0, 2).mul(&e(1, 0).mul(e(2, 1)).sub(&e(1, 1).mul(e(2, 0))));
            let d = t1.sub(&t2).add(&t3);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

fn surface_nodes(x: &MultiPoly, nodes: &[ProjPoint], rng: &mut ChaCha8Rng) -> serde_json::Value {
    let grad = x.gradient();
    let finite = matches!(finiteness_p3(&grad, rng, 4), Finiteness::Certified { .. });
    let length = finite.then(|| hilbert_value(&grad, macaulay_bound(&grad)));
    let singular = nodes.iter().all(|pt| x.vanishes_at(pt) && grad.iter().all(|g| g.vanishes_at(pt)));
    let mut distinct = nodes.to_vec();
    distinct.sort_by(|a, b| a.coords().cmp(b.coords()));
    distinct.dedup();
    let ok = length == Some(nodes.len()) && singular && distinct.len() == nodes.len();
    json!({ "ok": ok, "jacobian_length": length, "nodes": nodes })
}

/// One record per hypothesis of the CH_0 criterion, for components of D
/// given as plane curves.
pub fn thm_ch0_hypotheses(data: &Ch0Data, seed: u64) -> VerificationReport {
    let p = data.m.field().modulus();
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(seed ^ (k << 32));
    let (x1, x2) = (&data.x1, &data.x2);
    let mut checks = Vec::new();

    let mut sys1 = vec![x1.clone(), x2.clone()];
    sys1.extend(x1.gradient());
    let mut sys2 = vec![x1.clone(), x2.clone()];
    sys2.extend(x2.gradient());
    let (s1, s2) = (empty_zero_set(&sys1), empty_zero_set(&sys2));
    checks.push(
        CheckRecord::new("a X' and X'' smooth along D", p, Evidence::Certificate)
            .status(s1 && s2)
            .summary("X', X'' and the partials of either have no common zero")
            .witnesses(json!({ "x1": s1, "x2": s2 })),
    );

    let mut r = rng(1);
    let n1 = surface_nodes(x1, &data.nodes1, &mut r);
    let n2 = surface_nodes(x2, &data.nodes2, &mut r);
    checks.push(
        CheckRecord::new("b X' and X'' have only isolated nodes", p, Evidence::Certificate)
            .status(n1["ok"] == true && n2["ok"] == true)
            .summary("Jacobian scheme length equals the number of listed singular points")
            .witnesses(json!({ "x1": n1, "x2": n2 })),
    );

    let all_nodes: Vec<&ProjPoint> = data.nodes1.iter().chain(&data.nodes2).collect();
    let ranks: Vec<Option<usize>> = all_nodes.iter().map(|pt| data.m.rank_at_point(pt).ok()).collect();
    let smooth: Vec<Option<bool>> = all_nodes.iter().map(|pt| node_smoothness_check(&data.m, pt).ok()).collect();
    checks.push(
        CheckRecord::new("c rank 1 at the nodes of X' and X''", p, Evidence::Exact)
            .status(ranks.iter().all(|r| *r == Some(1)))
            .summary("bundle evaluated at every node")
            .witnesses(json!({ "ranks": ranks, "total_space_smooth": smooth })),
    );

    let mut r = rng(4);
    let (nodal, own_nodes, d_witness) = nodal_union(data, &mut r);
    checks.push(
        CheckRecord::new("d D has only nodes", p, Evidence::Certificate)
            .status(nodal)
            .summary("components lie on X' and X'' with total degree deg X' deg X''; each has ordinary nodes only; pairwise transversal; no triple points")
            .witnesses(d_witness),
    );

    let mut r = rng(5);
    let minors = data.m.minors2();
    let mut failures = Vec::new();
    let mut found = BTreeMap::new();
    for (k, c) in data.curves.iter().enumerate() {
        match c.common_zeros(&minors, &mut r) {
            PlaneZeros::Points(pts) => {
                for pt in &pts {
                    let on_other = data.curves.iter().enumerate().any(|(j, o)| j != k && o.contains(pt));
                    if !on_other && !own_nodes[k].contains(pt) {
                        failures.push(format!("{}: rank 1 at {pt}", c.name));
                    }
                }
                found.insert(c.name.clone(), pts);
            }
            other => failures.push(format!("{}: {other:?}", c.name)),
        }
    }
    checks.push(
        CheckRecord::new("e rank 2 along D off its nodes", p, Evidence::Certificate)
            .status(failures.is_empty())
            .summary("2x2 minors restricted to each component vanish only at nodes of D")
            .witnesses(json!({ "rank_one_points": found, "failures": failures })),
    );

    let own_ranks: Vec<(String, Vec<Option<usize>>)> = data
        .curves
        .iter()
        .zip(&own_nodes)
        .map(|(c, pts)| (c.name.clone(), pts.iter().map(|pt| data.m.rank_at_point(pt).ok()).collect()))
        .collect();
    checks.push(
        CheckRecord::new("f rank 1 at the nodes of each D_i", p, Evidence::Exact)
            .status(own_ranks.iter().all(|(_, rs)| rs.iter().all(|r| *r == Some(1))))
            .summary("bundle evaluated at the singular points of each component")
            .witnesses(own_ranks),
    );

    checks.push(sampled_classes(data, p));
    VerificationReport::new(checks)
}

/// Certificate that D = X' ∩ X'' is the nodal union of the given curves.
/// Returns the verdict, the singular points of each curve and a witness.
fn nodal_union(data: &Ch0Data, rng: &mut ChaCha8Rng) -> (bool, Vec<Vec<ProjPoint>>, serde_json::Value) {
    let (x1, x2) = (&data.x1, &data.x2);
    let mut failures = Vec::new();
    let mut total = 0;
    let mut own = Vec::new();
    for c in &data.curves {
        let (f, images) = c.restricted();
        for x in [x1, x2] {
            let r = x.substitute_linear(&images).expect("same ambient space");
            if !r.is_zero() && !f.divides(&r) {
                failures.push(format!("{} does not lie on {x}", c.name));
            }
        }
        total += c.degree();
        match c.singular_points(rng) {
            Ok(pts) => {
                for pt in &pts {
                    if !c.ordinary_node(pt) {
                        failures.push(format!("{}: {pt} is not an ordinary node", c.name));
                    }
                }
                own.push(pts);
            }
            Err(e) => {
                failures.push(e);
                own.push(Vec::new());
            }
        }
    }
    let expected = x1.homogeneous_degree().unwrap_or(0) * x2.homogeneous_degree().unwrap_or(0);
    if total != expected {
        failures.push(format!("total degree {total}, expected {expected}"));
    }
    let n = data.curves.len();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (ca, cb) = (&data.curves[a], &data.curves[b]);
            let gens = [&ca.plane, &ca.equation, &cb.plane, &cb.equation];
            let jac: Vec<Vec<MultiPoly>> = gens.iter().map(|g| g.gradient()).collect();
            let mut sys: Vec<MultiPoly> = gens.iter().map(|g| (*g).clone()).collect();
            sys.extend(minors3(&jac));
            let transversal = empty_zero_set(&sys);
            let nodes_apart = own[a].iter().all(|pt| !cb.contains(pt)) && own[b].iter().all(|pt| !ca.contains(pt));
            if !transversal || !nodes_apart {
                failures.push(format!("{} and {} are not transversal", ca.name, cb.name));
            }
            pairs.push(json!({ "pair": [ca.name, cb.name], "transversal": transversal }));
            for cc in &data.curves[b + 1..] {
                let triple = [&ca.plane, &ca.equation, &cb.plane, &cb.equation, &cc.plane, &cc.equation];
                let sys: Vec<MultiPoly> = triple.iter().map(|g| (*g).clone()).collect();
                if !empty_zero_set(&sys) {
                    failures.push(format!("{}, {} and {} share a point", ca.name, cb.name, cc.name));
                }
            }
        }
    }
    let w = json!({ "total_degree": total, "pairs": pairs, "component_nodes": own, "failures": failures });
    (failures.is_empty(), own, w)
}

fn sampled_classes(data: &Ch0Data, p: u64) -> CheckRecord {
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    let mut off = Vec::new();
    match LocalClassifier::new(&data.m, &data.x1, &data.x2) {
        Ok(cl) => {
            for c in &data.curves {
                for pt in c.points() {
                    let key = match cl.classify(&pt) {
                        Ok(lc) => {
                            if lc.reason.is_some() {
                                off.push(json!({ "point": pt, "class": lc }));
                            }
                            serde_json::to_value(lc.tag).unwrap().as_str().unwrap().to_string()
                        }
                        Err(e) => {
                            off.push(json!({ "point": pt, "error": e.to_string() }));
                            "error".into()
                        }
                    };
                    *tally.entry(key).or_default() += 1;
                }
            }
        }
        Err(e) => off.push(json!({ "error": e.to_string() })),
    }
    off.truncate(10);
    CheckRecord::new("g local normal forms at F_p-points of D", p, Evidence::Sampling)
        .status(off.is_empty())
        .summary("every sampled point falls in one of the three cases")
        .witnesses(json!({ "tally": tally, "off_table": off }))
}

/// Splitting and transversality witnesses for the Brauer graph of a bundle
/// whose discriminant is X' ∪ X'' with X' ∩ X'' the listed curves.
pub fn two_surface_witnesses(
    data: &Ch0Data,
    names: [&str; 2],
    budget: usize,
    seed: u64,
) -> (Vec<ComponentWitness>, Vec<CurveWitness>) {
    let comps = [&data.x1, &data.x2]
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(90 + k as u64));
            let w = split_witnesses(&data.m, s, &mut rng, budget).ok();
            ComponentWitness {
                name: names[k].to_string(),
                split_point: w.as_ref().map(|w| w.split_point.clone()),
                nonsplit_point: w.map(|w| w.nonsplit_point),
            }
        })
        .collect();
    let (g1, g2) = (data.x1.gradient(), data.x2.gradient());
    let field = data.m.field();
    let curves = data
        .curves
        .par_iter()
        .map(|c| {
            let pts = c.points();
            let types: Vec<FiberType> = pts
                .iter()
                .map(|pt| classify_fiber_unchecked(&data.m, pt))
                .filter(|t| t.rank() == 2)
                .collect();
            let first = types.first().copied();
            // geometrically reducible iff the split type is constant along the curve
            let constant = types.iter().all(|&t| Some(t) == first);
            let transversal = pts.iter().any(|pt| {
                let a: Vec<u64> = g1.iter().map(|g| g.eval(pt.coords())).collect();
                let b: Vec<u64> = g2.iter().map(|g| g.eval(pt.coords())).collect();
                Matrix::from_rows(field, vec![a, b]).rank() == 2
            });
            CurveWitness {
                i: 0,
                j: 1,
                name: c.name.clone(),
                generic_rank2: Some(first.is_some()),
                cover_reducible: Some(first.is_some() && constant),
                transversal: Some(transversal),
            }
        })
        .collect();
    (comps, curves)
}

fn classify_fiber_unchecked(m: &GradedConicBundle, pt: &ProjPoint) -> FiberType {
    m.classify_fiber(pt).expect("point of the ambient space")
}
