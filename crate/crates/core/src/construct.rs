//! Linear systems of plane curves with prescribed multiplicities, the
//! determinant-combining matrix, square roots modulo a contact line,
//! 2x2 determinantal representations and lifting plane data to P^3.

use thiserror::Error;

use crate::cayley::{CayleyError, LineConfig};
use crate::conic::{ConicError, GradedConicBundle};
use crate::gf::Fp;
use crate::linalg::{Matrix, Solution};
use crate::poly::{monomials_of_degree, Monomial, MultiPoly, PolyError, ProjPoint, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("determinant identity failed: {0}")]
    IdentityFailure(String),
    #[error("not nodal on the contact line: {0}")]
    NotNodalOnContact(String),
    #[error("linear system infeasible: {0}")]
    LiftInfeasible(String),
    #[error("divisibility failed: {0}")]
    DivisibilityFailure(String),
    #[error("polynomial not in the image of the pullback (equation {row})")]
    NotInImage { row: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// A linear condition on homogeneous polynomials of fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// Multiplicity at least m at the point.
    Multiplicity(ProjPoint, usize),
    /// Restriction to the line through the two points equals the binary form.
    Restriction(ProjPoint, ProjPoint, MultiPoly),
}

/// All partial derivatives of exact order k.
pub fn partials_of_order(g: &MultiPoly, k: usize) -> Vec<MultiPoly> {
    let n = g.nvars();
    monomials_of_degree(n, k)
        .into_iter()
        .map(|alpha| {
            let mut h = g.clone();
            for (i, &e) in alpha.0.iter().enumerate().take(n) {
                for _ in 0..e {
                    h = h.partial(i);
                }
            }
            h
        })
        .collect()
}

/// Multiplicity of g at P (order of the first nonvanishing partial); the
/// degree plus one for the zero polynomial. Valid for p > deg g.
pub fn multiplicity_at(g: &MultiPoly, pt: &ProjPoint) -> usize {
    let d = g.total_degree().unwrap_or(0);
    if g.is_zero() {
        return d + 1;
    }
    for k in 0..=d {
        if partials_of_order(g, k).iter().any(|h| !h.vanishes_at(pt)) {
            return k;
        }
    }
    d + 1
}

impl Condition {
    /// Values of the linear functionals on a form g of the given degree.
    fn values(&self, g: &MultiPoly, degree: usize) -> Result<Vec<u64>, ConstructError> {
        match self {
            // by Euler's relation the order m-1 partials vanishing at P forces
            // all lower ones to vanish when p > degree
            Condition::Multiplicity(pt, m) => {
                if *m == 0 {
                    return Ok(vec![]);
                }
                Ok(partials_of_order(g, m - 1).iter().map(|h| h.eval(pt.coords())).collect())
            }
            Condition::Restriction(p, q, _) => {
                let r = g.restrict_to_line(p, q)?;
                Ok((0..=degree).map(|k| r.coeff(&binary_monomial(k, degree - k))).collect())
            }
        }
    }

    fn target(&self, degree: usize, len: usize) -> Vec<u64> {
        match self {
            Condition::Multiplicity(..) => vec![0; len],
            Condition::Restriction(_, _, form) => {
                (0..=degree).map(|k| form.coeff(&binary_monomial(k, degree - k))).collect()
            }
        }
    }
}

fn binary_monomial(a: usize, b: usize) -> Monomial {
    let mut m = [0u8; crate::poly::MAX_VARS];
    m[0] = a as u8;
    m[1] = b as u8;
    Monomial(m)
}

/// Solution set of an affine linear system: `offset + sum c_k basis_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: MultiPoly,
    pub kernel: Vec<MultiPoly>,
}

/// Find combinations `offset + sum c_k basis_k` satisfying all conditions.
/// The particular solution has every free coefficient zero.
pub fn solve_over_basis(
    basis: &[MultiPoly],
    conditions: &[Condition],
    offset: &MultiPoly,
) -> Result<AffineSolution, ConstructError> {
    let f = offset.field();
    let degree = offset
        .homogeneous_degree()
        .or_else(|| basis.first().and_then(|b| b.homogeneous_degree()))
        .unwrap_or(0);
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut col = Vec::new();
        for c in conditions {
            col.extend(c.values(b, degree)?);
        }
        cols.push(col);
    }
    let mut rhs = Vec::new();
    for c in conditions {
        let v = c.values(offset, degree)?;
        let t = c.target(degree, v.len());
        rhs.extend(t.iter().zip(&v).map(|(&a, &b)| f.sub(a, b)));
    }
    let nrows = rhs.len();
    let m = Matrix::from_rows(f, (0..nrows).map(|r| cols.iter().map(|c| c[r]).collect()).collect());
    let m = if nrows == 0 { Matrix::zeros(f, 0, basis.len()) } else { m };
    let combine = |coeffs: &[u64], base: &MultiPoly| {
        basis.iter().zip(coeffs).fold(base.clone(), |acc, (b, &c)| if c == 0 { acc } else { acc.add(&b.scale(c)) })
    };
    let zero = MultiPoly::zero(f, offset.vars());
    match solve_or_free(&m, &rhs, basis.len()) {
        Solution::Consistent { particular, kernel } => Ok(AffineSolution {
            particular: combine(&particular, offset),
            kernel: kernel.iter().map(|k| combine(k, &zero)).collect(),
        }),
        Solution::Inconsistent { row } => {
            Err(ConstructError::LiftInfeasible(format!("equation {row} of {nrows} cannot be satisfied")))
        }
    }
}

fn solve_or_free(m: &Matrix, rhs: &[u64], ncols: usize) -> Solution {
    if m.rows() == 0 {
        let kernel = (0..ncols)
            .map(|i| {
                let mut v = vec![0; ncols];
                v[i] = 1;
                v
            })
            .collect();
        return Solution::Consistent { particular: vec![0; ncols], kernel };
    }
    m.solve(rhs)
}

/// Plane curves of a given degree subject to conditions.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub field: Fp,
    pub vars: Vars,
    pub degree: usize,
    pub conditions: Vec<Condition>,
}

impl LinearSystem {
    pub fn new(field: Fp, degree: usize) -> Self {
        LinearSystem { field, vars: Vars::p2(), degree, conditions: Vec::new() }
    }

    pub fn with(mut self, c: Condition) -> Self {
        self.conditions.push(c);
        self
    }

    pub fn monomial_basis(&self) -> Vec<MultiPoly> {
        monomials_of_degree(self.vars.len(), self.degree)
            .into_iter()
            .map(|m| MultiPoly::from_terms(self.field, &self.vars, [(m, 1)]))
            .collect()
    }

    /// Basis of the homogeneous solution space (restriction targets ignored
    /// only if none are present; otherwise use `solve_affine`).
    pub fn solve(&self) -> Result<Vec<MultiPoly>, ConstructError> {
        let sol = self.solve_affine()?;
        if !sol.particular.is_zero() {
            return Err(ConstructError::LiftInfeasible("system is affine, not homogeneous".into()));
        }
        Ok(sol.kernel)
    }

    pub fn solve_affine(&self) -> Result<AffineSolution, ConstructError> {
        let zero = MultiPoly::zero(self.field, &self.vars);
        solve_over_basis(&self.monomial_basis(), &self.conditions, &zero)
    }
}

/// Rank test for the evaluation map from forms of degree 3d/2-6 to the
/// base points with multiplicity d/2-2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityResult {
    pub rank: usize,
    pub required: usize,
    pub passed: bool,
    /// A left kernel vector (relation among the conditions) when rank is short.
    pub witness: Option<Vec<u64>>,
}

pub fn genericity_check(cfg: &LineConfig, d: usize) -> Result<GenericityResult, ConstructError> {
    if d < 4 || d % 2 == 1 {
        return Err(ConstructError::DegreeMismatch(format!("d = {d} must be even and at least 4")));
    }
    let f = cfg.field();
    let deg = 3 * d / 2 - 6;
    let m = d / 2 - 2;
    let sys = LinearSystem::new(f, deg);
    let basis = sys.monomial_basis();
    let mut rows = Vec::new();
    for pt in cfg.base_points() {
        let c = Condition::Multiplicity(pt.clone(), m);
        let vals: Vec<Vec<u64>> = basis.iter().map(|b| c.values(b, deg)).collect::<Result<_, _>>()?;
        for r in 0..vals.first().map_or(0, |v| v.len()) {
            rows.push(vals.iter().map(|v| v[r]).collect::<Vec<u64>>());
        }
    }
    let required = rows.len();
    if required == 0 {
        return Ok(GenericityResult { rank: 0, required, passed: true, witness: None });
    }
    let mat = Matrix::from_rows(f, rows.clone());
    let rank = mat.rank();
    let witness = if rank < required {
        let t = Matrix::from_rows(f, (0..basis.len()).map(|c| rows.iter().map(|r| r[c]).collect()).collect());
        t.kernel().into_iter().next()
    } else {
        None
    };
    Ok(GenericityResult { rank, required, passed: rank == required, witness })
}

/// Output of the combining construction.
#[derive(Debug, Clone)]
pub struct Combined {
    pub n: GradedConicBundle,
    /// det of B = [[b, c], [c, d]] with d the lower-right minor of A.
    pub det_b: MultiPoly,
}

/// N = [[c^2 a00 - b det A, c a01, c a02], [c a01, a11, a12], [c a02, a12, a22]].
pub fn combine(a: &GradedConicBundle, b: &MultiPoly, c: &MultiPoly) -> Result<Combined, ConstructError> {
    let e = a.entries();
    let det_a = a.discriminant();
    let minor = a.lower_right_minor();
    let deg_det = det_a.homogeneous_degree().ok_or_else(|| ConstructError::DegreeMismatch("det A vanishes".into()))?;
    let deg_a00 = a.graded_type()[0];
    if !c.is_zero() {
        let (Some(db), Some(dc)) = (b.homogeneous_degree(), c.homogeneous_degree()) else {
            return Err(ConstructError::DegreeMismatch("b and c must be nonzero homogeneous".into()));
        };
        if db + deg_det != 2 * dc + deg_a00 {
            return Err(ConstructError::DegreeMismatch(format!(
                "deg b + deg det A = {} but 2 deg c + deg a00 = {}",
                db + deg_det,
                2 * dc + deg_a00
            )));
        }
    }
    let n00 = c.mul(c).mul(&e[0][0]).sub(&b.mul(&det_a));
    let n = GradedConicBundle::from_upper([
        n00,
        c.mul(&e[0][1]),
        c.mul(&e[0][2]),
        e[1][1].clone(),
        e[1][2].clone(),
        e[2][2].clone(),
    ])?;
    let det_b = b.mul(&minor).sub(&c.mul(c));
    let lhs = n.discriminant();
    let rhs = det_a.mul(&det_b).neg();
    if lhs != rhs {
        return Err(ConstructError::IdentityFailure("det N != -det A * det B".into()));
    }
    Ok(Combined { n, det_b })
}

/// Intermediate and final data of the square-root construction.
#[derive(Debug, Clone)]
pub struct SqrtModContact {
    pub g: MultiPoly,
    pub g0: MultiPoly,
    pub g1_prime: MultiPoly,
    pub g2_prime: MultiPoly,
    /// Chart points spanning the contact line.
    pub line_points: (ProjPoint, ProjPoint),
}

/// Two distinct points spanning the line `s = 0`, first in enumeration order.
pub fn line_points(s: &MultiPoly) -> (ProjPoint, ProjPoint) {
    let f = s.field();
    let c = [0, 1, 2].map(|i| s.coeff(&Monomial::var(i, 1)));
    let k = (0..3).rev().find(|&i| c[i] != 0).expect("nonzero line");
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let pt = |j: usize| {
        let mut v = [0u64; 3];
        v[j] = 1;
        v[k] = f.neg(f.div(c[j], c[k]).unwrap());
        ProjPoint::new(f, &v).unwrap()
    };
    (pt(others[0]), pt(others[1]))
}

/// g of degree 3d/2 with f - g^2 divisible by s^2 and multiplicity d/2 at the
/// base points, for f of type (d,d,d) with 3d/2 nodes on the contact line s.
pub fn sqrt_mod_contact(
    f: &MultiPoly,
    cfg: &LineConfig,
    nodes_on_lc: &[ProjPoint],
    d: usize,
) -> Result<SqrtModContact, ConstructError> {
    let field = cfg.field();
    if d < 4 || d % 2 == 1 {
        return Err(ConstructError::DegreeMismatch(format!("d = {d} must be even and at least 4")));
    }
    if f.homogeneous_degree() != Some(3 * d) {
        return Err(ConstructError::DegreeMismatch(format!("f must have degree {}", 3 * d)));
    }
    if field.modulus() <= 3 * d as u64 {
        return Err(PolyError::WildCharacteristic { p: field.modulus(), degree: 3 * d }.into());
    }
    let s = cfg.contact();
    for pt in nodes_on_lc {
        if !s.vanishes_at(pt) {
            return Err(ConstructError::NotNodalOnContact(format!("{pt} is not on the contact line")));
        }
        if multiplicity_at(f, pt) < 2 {
            return Err(ConstructError::NotNodalOnContact(format!("f is not singular at {pt}")));
        }
    }
    let (p, q) = line_points(s);
    let h = f.restrict_to_line(&p, &q)?;
    let (e, c) = h
        .sqrt_binary_form()
        .map_err(|err| ConstructError::NotNodalOnContact(format!("restriction to the contact line: {err}")))?;
    if c.value() != 1 {
        return Err(ConstructError::NotNodalOnContact(format!(
            "restriction is {} times a square, {} not a square",
            c.value(),
            c.value()
        )));
    }
    let half = d / 2;
    let base: Vec<Condition> =
        cfg.base_points().iter().map(|pt| Condition::Multiplicity(pt.clone(), half)).collect();

    // (a) g0 with the prescribed restriction and multiplicity d/2 at the base points
    let mut sys = LinearSystem::new(field, 3 * d / 2);
    sys.conditions = base.clone();
    sys.conditions.push(Condition::Restriction(p.clone(), q.clone(), e));
    let g0 = sys.solve_affine()?.particular;

    // (b) f1 = (f - g0^2)/s, f1' = f1 / l1 l2 l3 l4
    let f1 = f
        .sub(&g0.mul(&g0))
        .exact_div(s)
        .map_err(|err| ConstructError::DivisibilityFailure(format!("f - g0^2 by s: {err}")))?;
    let f1p = f1
        .exact_div(&cfg.line_product())
        .map_err(|err| ConstructError::DivisibilityFailure(format!("f1 by the lines: {err}")))?;

    // (c) 2 g0 g1' = f1' on the line, then lift
    let g0_line = g0.restrict_to_line(&p, &q)?;
    let f1_line = f1p.restrict_to_line(&p, &q)?;
    let deg1 = 3 * d / 2 - 5;
    let g1_line = if f1_line.is_zero() {
        MultiPoly::zero(field, &Vars::binary())
    } else {
        f1_line
            .exact_div(&g0_line.scale(2))
            .map_err(|err| ConstructError::DivisibilityFailure(format!("f1' by 2 g0 on the line: {err}")))?
    };
    let mut sys1 = LinearSystem::new(field, deg1);
    sys1.conditions.push(Condition::Restriction(p.clone(), q.clone(), g1_line));
    let g1p = sys1.solve_affine()?.particular;

    // (d) g2' so that g1' + s g2' has multiplicity d/2 - 2 at the base points
    let g2p = if d >= 6 {
        let basis: Vec<MultiPoly> = LinearSystem::new(field, 3 * d / 2 - 6)
            .monomial_basis()
            .into_iter()
            .map(|b| b.mul(s))
            .collect();
        let conds: Vec<Condition> =
            cfg.base_points().iter().map(|pt| Condition::Multiplicity(pt.clone(), half - 2)).collect();
        let sol = solve_over_basis(&basis, &conds, &g1p)?;
        sol.particular.sub(&g1p).exact_div(s)?
    } else {
        MultiPoly::zero(field, &Vars::p2())
    };

    // (e) assemble and check unconditionally
    let lp = cfg.line_product();
    let g = g0.add(&s.mul(&g1p).mul(&lp)).add(&s.mul(s).mul(&g2p).mul(&lp));
    let s2 = s.mul(s);
    f.sub(&g.mul(&g))
        .exact_div(&s2)
        .map_err(|err| ConstructError::DivisibilityFailure(format!("f - g^2 by s^2: {err}")))?;
    for pt in cfg.base_points() {
        let m = multiplicity_at(&g, pt);
        if m < half {
            return Err(ConstructError::DivisibilityFailure(format!("g has multiplicity {m} at {pt}")));
        }
    }
    Ok(SqrtModContact { g, g0, g1_prime: g1p, g2_prime: g2p, line_points: (p, q) })
}

/// t = -(f - r^2)/q, so that -f = q t - r^2 = det [[q, r], [r, t]].
pub fn determinantal_rep(f: &MultiPoly, q: &MultiPoly, r: &MultiPoly) -> Result<MultiPoly, ConstructError> {
    let t = f
        .sub(&r.mul(r))
        .exact_div(q)
        .map_err(|err| ConstructError::DivisibilityFailure(format!("f - r^2 by q: {err}")))?
        .neg();
    if q.mul(&t).sub(&r.mul(r)) != f.neg() {
        return Err(ConstructError::IdentityFailure("q t - r^2 != -f".into()));
    }
    Ok(t)
}

/// Preimage of a plane form under the parametrization.
#[derive(Debug, Clone)]
pub struct Lift {
    pub form: MultiPoly,
    /// Dimension of the space of degree-m forms with zero pullback.
    pub kernel_dim: usize,
    pub kernel: Vec<MultiPoly>,
}

/// Degree-m form G on P^3 with G(phi) = g, reduced-echelon representative.
pub fn lift_to_p3(g: &MultiPoly, phi: &[MultiPoly; 4], m: usize) -> Result<Lift, ConstructError> {
    let field = g.field();
    let monos = monomials_of_degree(4, m);
    let p3 = Vars::cayley();
    let pulled: Vec<MultiPoly> = monos
        .iter()
        .map(|mono| MultiPoly::from_terms(field, &p3, [(*mono, 1)]).substitute(phi))
        .collect::<Result<_, _>>()?;
    let target_monos = monomials_of_degree(3, 3 * m);
    if !g.is_zero() && g.homogeneous_degree() != Some(3 * m) {
        return Err(ConstructError::DegreeMismatch(format!("expected a plane form of degree {}", 3 * m)));
    }
    let rows: Vec<Vec<u64>> = target_monos.iter().map(|tm| pulled.iter().map(|pp| pp.coeff(tm)).collect()).collect();
    let rhs: Vec<u64> = target_monos.iter().map(|tm| g.coeff(tm)).collect();
    let mat = Matrix::from_rows(field, rows);
    let build = |v: &[u64]| MultiPoly::from_coeff_vector(field, &p3, &monos, v);
    match mat.solve(&rhs) {
        Solution::Consistent { particular, kernel } => Ok(Lift {
            form: build(&particular),
            kernel_dim: kernel.len(),
            kernel: kernel.iter().map(|k| build(k)).collect(),
        }),
        Solution::Inconsistent { row } => Err(ConstructError::NotInImage { row }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::cayley_bundle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn cfg(seed: u64) -> LineConfig {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            if let Ok(c) = LineConfig::random(fp(10007), &mut rng) {
                return c;
            }
        }
    }

    fn random_form<R: Rng>(f: Fp, vars: &Vars, d: usize, rng: &mut R) -> MultiPoly {
        let monos = monomials_of_degree(vars.len(), d);
        let coeffs: Vec<u64> = monos.iter().map(|_| rng.gen_range(0..f.modulus())).collect();
        MultiPoly::from_coeff_vector(f, vars, &monos, &coeffs)
    }

    #[test]
    fn cubics_through_base_points() {
        let c = cfg(1);
        let mut sys = LinearSystem::new(c.field(), 3);
        for pt in c.base_points() {
            sys = sys.with(Condition::Multiplicity(pt.clone(), 1));
        }
        assert_eq!(sys.solve().unwrap().len(), 4);
    }

    #[test]
    fn line_through_two_points() {
        let f = fp(101);
        let sys = LinearSystem::new(f, 1)
            .with(Condition::Multiplicity(ProjPoint::from_signed(f, &[1, 0, 0]).unwrap(), 1))
            .with(Condition::Multiplicity(ProjPoint::from_signed(f, &[0, 1, 0]).unwrap(), 1));
        let b = sys.solve().unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_string(), "w");
    }

    #[test]
    fn multiplicity_conditions() {
        let f = fp(101);
        let o = ProjPoint::from_signed(f, &[0, 0, 1]).unwrap();
        let sys = LinearSystem::new(f, 3).with(Condition::Multiplicity(o.clone(), 2));
        let basis = sys.solve().unwrap();
        assert_eq!(basis.len(), 10 - 3);
        for g in basis {
            assert!(multiplicity_at(&g, &o) >= 2);
        }
    }

    #[test]
    fn genericity_passes_on_random_config() {
        let r = genericity_check(&cfg(4), 6).unwrap();
        assert!(r.passed);
        assert_eq!((r.rank, r.required), (6, 6));
    }

    #[test]
    fn combine_shape_and_identity() {
        let c = cfg(2);
        let a = c.cayley_matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = random_form(c.field(), &Vars::cayley(), 4, &mut rng);
        let cc = random_form(c.field(), &Vars::cayley(), 3, &mut rng);
        let out = combine(&a, &b, &cc).unwrap();
        assert_eq!(out.n.degree_shape(), [[7, 4, 4], [4, 1, 1], [4, 1, 1]]);
        assert_eq!(out.n.discriminant().homogeneous_degree(), Some(9));
        let bad = combine(&a, &cc, &cc);
        assert!(matches!(bad, Err(ConstructError::DegreeMismatch(_))));
    }

    #[test]
    fn combine_with_zero_c() {
        let f = fp(10007);
        let a = cayley_bundle(f);
        let b = MultiPoly::parse("X1^2 + X2*X3", &Vars::cayley(), f, true).unwrap();
        let zero = MultiPoly::zero(f, &Vars::cayley());
        let out = combine(&a, &b, &zero).unwrap();
        let expect = b.mul(&a.discriminant()).mul(&a.lower_right_minor()).neg();
        assert_eq!(out.n.discriminant(), expect);
    }

    #[test]
    fn square_input_recovers_root() {
        let c = cfg(11);
        let f = c.field();
        // h of type (3,3,3): degree 9, multiplicity 3 at the base points
        let mut sys = LinearSystem::new(f, 9);
        for pt in c.base_points() {
            sys = sys.with(Condition::Multiplicity(pt.clone(), 3));
        }
        let basis = sys.solve().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = basis
            .iter()
            .fold(MultiPoly::zero(f, &Vars::p2()), |acc, b| acc.add(&b.scale(rng.gen_range(1..f.modulus()))));
        let target = h.mul(&h);
        let out = sqrt_mod_contact(&target, &c, &[], 6).unwrap();
        let s2 = c.contact().mul(c.contact());
        let diff_minus = out.g.sub(&h);
        let diff_plus = out.g.add(&h);
        assert!(s2.divides(&diff_minus) || s2.divides(&diff_plus));
    }

    #[test]
    fn not_nodal_on_contact() {
        let c = cfg(12);
        let f = c.field();
        let s = c.contact();
        // s^18-free perturbation: restriction with simple roots
        let (p, _) = line_points(s);
        let g = random_form(f, &Vars::p2(), 18, &mut ChaCha8Rng::seed_from_u64(1));
        let r = sqrt_mod_contact(&g, &c, &[], 6);
        assert!(matches!(r, Err(ConstructError::NotNodalOnContact(_))));
        let r = sqrt_mod_contact(&g, &c, &[p], 6);
        assert!(matches!(r, Err(ConstructError::NotNodalOnContact(_))));
    }

    #[test]
    fn determinantal_rep_trivial() {
        let f = fp(101);
        let v = Vars::p2();
        let r = MultiPoly::parse("u^2 + v*w", &v, f, true).unwrap();
        let q = MultiPoly::parse("u*v", &v, f, true).unwrap();
        let t = determinantal_rep(&r.mul(&r), &q, &r).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn lift_tautological() {
        let c = cfg(3);
        let phi = c.parametrization();
        let l = lift_to_p3(&phi[0], &phi, 1).unwrap();
        assert_eq!(l.form.to_string(), "X0");
        assert_eq!(l.kernel_dim, 0);
        let q = lift_to_p3(&c.contact().mul(c.contact()).mul(&c.line_product()), &phi, 2).unwrap();
        assert!(q.form.proportional(&c.contact_quadric()).is_some());
        let cubic = lift_to_p3(&phi[1].mul(&phi[2]).mul(&phi[3]), &phi, 3).unwrap();
        assert_eq!(cubic.kernel_dim, 1);
        assert!(cubic.kernel[0].proportional(&cayley_bundle(c.field()).discriminant()).is_some());
    }
}
