//! The Cayley cubic as the image of P^2 under cubics through the six
//! intersection points of four general lines, with the class bookkeeping for
//! plane curves on the blown-up plane.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conic::GradedConicBundle;
use crate::gf::Fp;
use crate::linalg::Matrix;
use crate::poly::{Monomial, MultiPoly, PolyError, ProjPoint, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("degenerate line configuration: {0}")]
    DegenerateConfig(String),
    #[error("not a contact quadric: {0}")]
    NotContact(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Base point names in the order E12, E13, E14, E23, E24, E34 (1-based lines).
pub const BASE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn base_point_name(pair: (usize, usize)) -> String {
    format!("E{}{}", pair.0 + 1, pair.1 + 1)
}

/// The standard linear symmetric matrix whose determinant is the Cayley cubic.
pub fn cayley_bundle(field: Fp) -> GradedConicBundle {
    GradedConicBundle::parse_upper(&["X0", "X1", "X2", "X0", "X3", "X0"], &Vars::cayley(), field)
        .expect("static matrix")
}

/// The four nodes (1:1:1:1), (1:-1:-1:1), (1:1:-1:-1), (1:-1:1:-1).
pub fn cayley_nodes(field: Fp) -> [ProjPoint; 4] {
    [[1, 1, 1, 1], [1, -1, -1, 1], [1, 1, -1, -1], [1, -1, 1, -1]]
        .map(|c| ProjPoint::from_signed(field, &c).unwrap())
}

fn line_coeffs(l: &MultiPoly) -> [u64; 3] {
    [0, 1, 2].map(|i| l.coeff(&Monomial::var(i, 1)))
}

fn cross(f: Fp, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
    let m = |x: u64, y: u64| f.mul(x, y);
    [
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

/// Four lines in general position, rescaled so that -L1 + L2 + L3 + L4 = 0,
/// a contact line, and the congruence S that realizes the contact quadric
/// as the lower-right minor of the Cayley matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineConfig {
    lines: [MultiPoly; 4],
    contact: MultiPoly,
    base_points: [ProjPoint; 6],
    /// ell[i] with (adj C)_ij pulled back = lambda * ell_i * ell_j * l1 l2 l3 l4.
    ell: [MultiPoly; 3],
    lambda: u64,
    /// First column of S; the contact quadric is w^t adj(C) w.
    w: [u64; 3],
}

impl LineConfig {
    pub fn new(lines: [MultiPoly; 4], contact: &MultiPoly) -> Result<Self, CayleyError> {
        let f = lines[0].field();
        for l in lines.iter().chain([contact]) {
            if l.homogeneous_degree() != Some(1) || l.nvars() != 3 {
                return Err(CayleyError::DegenerateConfig(format!("{l} is not a line in P^2")));
            }
            if l.field() != f || l.vars() != lines[0].vars() {
                return Err(PolyError::VariableMismatch.into());
            }
        }
        let lines = lines.map(|l| l.with_vars(&Vars::p2()));
        let contact = contact.with_vars(&Vars::p2()).monic();
        let coeffs = lines.clone().map(|l| line_coeffs(&l));
        for skip in 0..4 {
            let rows: Vec<Vec<u64>> = (0..4).filter(|&i| i != skip).map(|i| coeffs[i].to_vec()).collect();
            if Matrix::from_rows(f, rows).det() == 0 {
                return Err(CayleyError::DegenerateConfig("three of the lines are concurrent".into()));
            }
        }
        // kernel of the 3x4 coefficient matrix gives the unique linear relation
        let cols = Matrix::from_rows(f, (0..3).map(|r| (0..4).map(|i| coeffs[i][r]).collect()).collect());
        let k = &cols.kernel()[0];
        let scales = [f.neg(k[0]), k[1], k[2], k[3]];
        let lines: [MultiPoly; 4] = std::array::from_fn(|i| lines[i].scale(scales[i]));
        let coeffs = lines.clone().map(|l| line_coeffs(&l));
        let base_points = BASE_PAIRS.map(|(a, b)| ProjPoint::new(f, &cross(f, coeffs[a], coeffs[b])).unwrap());
        for (pt, pair) in base_points.iter().zip(BASE_PAIRS) {
            if contact.vanishes_at(pt) {
                return Err(CayleyError::DegenerateConfig(format!(
                    "contact line passes through {}",
                    base_point_name(pair)
                )));
            }
        }
        let (ell, lambda) = contact_pencil(&lines)?;
        let m = Matrix::from_rows(f, (0..3).map(|r| ell.iter().map(|l| line_coeffs(l)[r]).collect()).collect());
        let w = match m.solve(&line_coeffs(&contact)) {
            crate::linalg::Solution::Consistent { particular, kernel } if kernel.is_empty() => {
                [particular[0], particular[1], particular[2]]
            }
            _ => return Err(CayleyError::DegenerateConfig("contact lines do not form a net".into())),
        };
        Ok(LineConfig { lines, contact, base_points, ell, lambda, w })
    }

    pub fn random<R: Rng>(field: Fp, rng: &mut R) -> Result<Self, CayleyError> {
        let v = Vars::p2();
        let p = field.modulus();
        let mut line = || MultiPoly::linear(field, &v, &[rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)]);
        let lines = std::array::from_fn(|_| line());
        LineConfig::new(lines, &line())
    }

    pub fn field(&self) -> Fp {
        self.contact.field()
    }

    pub fn lines(&self) -> &[MultiPoly; 4] {
        &self.lines
    }

    pub fn contact(&self) -> &MultiPoly {
        &self.contact
    }

    pub fn base_points(&self) -> &[ProjPoint; 6] {
        &self.base_points
    }

    /// Product of the four lines.
    pub fn line_product(&self) -> MultiPoly {
        self.lines.iter().skip(1).fold(self.lines[0].clone(), |acc, l| acc.mul(l))
    }

    pub fn base_point(&self, a: usize, b: usize) -> &ProjPoint {
        let idx = BASE_PAIRS.iter().position(|&pr| pr == (a.min(b), a.max(b))).expect("valid pair");
        &self.base_points[idx]
    }

    /// X0..X3 as signed sums of the cubics Y_i (product of the lines other than i).
    pub fn parametrization(&self) -> [MultiPoly; 4] {
        parametrization_of(&self.lines)
    }

    /// S with S A S^t equal to the standard Cayley matrix: first column w,
    /// completed by unit vectors.
    pub fn s_matrix(&self) -> [[u64; 3]; 3] {
        let lead = (0..3).find(|&i| self.w[i] != 0).unwrap();
        let others: Vec<usize> = (0..3).filter(|&i| i != lead).collect();
        let mut s = [[0u64; 3]; 3];
        for r in 0..3 {
            s[r][0] = self.w[r];
        }
        s[others[0]][1] = 1;
        s[others[1]][2] = 1;
        s
    }

    /// The Cayley bundle A = T C T^t with T = S^-1, so that its lower-right
    /// minor is the contact quadric of this configuration.
    pub fn cayley_matrix(&self) -> GradedConicBundle {
        let f = self.field();
        let s = self.s_matrix();
        let sm = Matrix::from_rows(f, s.iter().map(|r| r.to_vec()).collect());
        let t = invert3(&sm);
        let c = cayley_bundle(f);
        let e = c.entries();
        let zero = MultiPoly::zero(f, &Vars::cayley());
        let entry = |i: usize, j: usize| {
            let mut acc = zero.clone();
            for a in 0..3 {
                for b in 0..3 {
                    acc = acc.add(&e[a][b].scale(f.mul(t.get(i, a), t.get(j, b))));
                }
            }
            acc
        };
        GradedConicBundle::from_upper([entry(0, 0), entry(0, 1), entry(0, 2), entry(1, 1), entry(1, 2), entry(2, 2)])
            .expect("congruent to a linear bundle")
    }

    /// Contact quadric w^t adj(C) w on P^3.
    pub fn contact_quadric(&self) -> MultiPoly {
        let f = self.field();
        let adj = cayley_bundle(f).adjugate();
        let mut acc = MultiPoly::zero(f, &Vars::cayley());
        for i in 0..3 {
            for j in 0..3 {
                acc = acc.add(&adj[i][j].scale(f.mul(self.w[i], self.w[j])));
            }
        }
        acc
    }

    /// Scalar lambda with (contact quadric) pulled back = lambda * L_c^2 * l1 l2 l3 l4.
    pub fn contact_scalar(&self) -> u64 {
        self.lambda
    }

    pub fn contact_net(&self) -> &[MultiPoly; 3] {
        &self.ell
    }

    pub fn to_file(&self) -> LineConfigFile {
        LineConfigFile {
            p: self.field().modulus(),
            lines: self.lines.clone().map(|l| l.to_string()),
            contact: self.contact.to_string(),
        }
    }
}

fn invert3(m: &Matrix) -> Matrix {
    let f = m.field();
    let n = 3;
    let mut cols = Vec::new();
    for j in 0..n {
        let mut e = vec![0u64; n];
        e[j] = 1;
        match m.solve(&e) {
            crate::linalg::Solution::Consistent { particular, .. } => cols.push(particular),
            _ => panic!("singular congruence"),
        }
    }
    Matrix::from_rows(f, (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

fn parametrization_of(lines: &[MultiPoly; 4]) -> [MultiPoly; 4] {
    let f = lines[0].field();
    let y: Vec<MultiPoly> = (0..4)
        .map(|i| {
            let mut acc = MultiPoly::constant(f, &Vars::p2(), 1);
            for (j, l) in lines.iter().enumerate() {
                if j != i {
                    acc = acc.mul(l);
                }
            }
            acc
        })
        .collect();
    let signs: [[i64; 4]; 4] = [[-1, 1, 1, 1], [-1, -1, -1, 1], [1, -1, 1, 1], [1, 1, -1, 1]];
    signs.map(|row| {
        row.iter()
            .zip(&y)
            .fold(MultiPoly::zero(f, &Vars::p2()), |acc, (&s, yi)| acc.add(&yi.scale(f.from_i64(s))))
    })
}

/// The linear forms ell_i and scalar lambda with
/// (adj C)_ij pulled back = lambda * ell_i * ell_j * l1 l2 l3 l4.
fn contact_pencil(lines: &[MultiPoly; 4]) -> Result<([MultiPoly; 3], u64), CayleyError> {
    let f = lines[0].field();
    let phi = parametrization_of(lines);
    let prod = lines.iter().skip(1).fold(lines[0].clone(), |acc, l| acc.mul(l));
    let adj = cayley_bundle(f).adjugate();
    let mut m: Vec<Vec<MultiPoly>> = Vec::new();
    for i in 0..3 {
        let mut row = Vec::new();
        for j in 0..3 {
            let pulled = adj[i][j].substitute(&phi)?;
            row.push(
                pulled
                    .exact_div(&prod)
                    .map_err(|e| CayleyError::NotContact(format!("minor ({i},{j}) not divisible by the lines: {e}")))?,
            );
        }
        m.push(row);
    }
    let l0 = square_root_line(&m[0][0])?;
    let lambda = m[0][0].proportional(&l0.mul(&l0)).unwrap();
    let denom = l0.scale(lambda);
    let ell: [MultiPoly; 3] = [
        l0.clone(),
        m[0][1].exact_div(&denom).map_err(|e| CayleyError::NotContact(e.to_string()))?,
        m[0][2].exact_div(&denom).map_err(|e| CayleyError::NotContact(e.to_string()))?,
    ];
    for i in 0..3 {
        for j in 0..3 {
            if m[i][j] != ell[i].mul(&ell[j]).scale(lambda) {
                return Err(CayleyError::NotContact(format!("minor ({i},{j}) is not a contact quadric")));
            }
        }
    }
    Ok((ell, lambda))
}

/// Monic line L with q proportional to L^2.
fn square_root_line(q: &MultiPoly) -> Result<MultiPoly, CayleyError> {
    if q.homogeneous_degree() != Some(2) {
        return Err(CayleyError::NotContact("residual is not a conic".into()));
    }
    let l = (0..q.nvars())
        .map(|i| q.partial(i))
        .find(|d| !d.is_zero())
        .ok_or_else(|| CayleyError::NotContact("residual conic vanishes".into()))?
        .monic();
    if q.proportional(&l.mul(&l)).is_none() {
        return Err(CayleyError::NotContact(format!("residual conic {q} is not a double line")));
    }
    Ok(l)
}

/// The diagonal adjugate entry `which` of `a` and the contact line of its
/// transform on P^2.
pub fn contact_line_from_minor(
    a: &GradedConicBundle,
    cfg: &LineConfig,
    which: usize,
) -> Result<(MultiPoly, MultiPoly), CayleyError> {
    let q = a.adjugate()[which][which].clone();
    let pulled = q.substitute(&cfg.parametrization())?;
    let rest = pulled
        .exact_div(&cfg.line_product())
        .map_err(|e| CayleyError::NotContact(format!("pullback not divisible by the lines: {e}")))?;
    Ok((q, square_root_line(&rest)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineConfigFile {
    pub p: u64,
    pub lines: [String; 4],
    pub contact: String,
}

impl LineConfigFile {
    pub fn to_config(&self) -> Result<LineConfig, CayleyError> {
        let f = Fp::new(self.p).map_err(PolyError::from)?;
        let v = Vars::p2();
        let mut lines = Vec::new();
        for s in &self.lines {
            lines.push(MultiPoly::parse(s, &v, f, true)?);
        }
        let lines: [MultiPoly; 4] = lines.try_into().unwrap();
        LineConfig::new(lines, &MultiPoly::parse(&self.contact, &v, f, true)?)
    }
}

/// Class alpha*H - sum beta_ij E_ij, betas ordered (b12, b34, b13, b24, b14, b23).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub alpha: u32,
    pub beta: [u32; 6],
}

impl CurveClass {
    pub fn from_type(b: [u32; 3]) -> Self {
        CurveClass { alpha: b[0] + b[1] + b[2], beta: [b[2], b[2], b[1], b[1], b[0], b[0]] }
    }

    /// beta_ij for 0-based line indices.
    pub fn beta_of(&self, a: usize, b: usize) -> u32 {
        let pos = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]
            .iter()
            .position(|&pr| pr == (a.min(b), a.max(b)))
            .expect("valid pair");
        self.beta[pos]
    }

    /// Whether the image on the Cayley cubic misses the four nodes.
    pub fn avoids_nodes(&self) -> bool {
        let [b12, b34, b13, b24, b14, b23] = self.beta;
        b12 == b34 && b13 == b24 && b14 == b23 && (0..4).all(|i| {
            let s: u32 = (0..4).filter(|&j| j != i).map(|j| self.beta_of(i, j)).sum();
            s == self.alpha
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInvariants {
    pub degree: i64,
    pub arithmetic_genus: i64,
    pub expected_moduli: i64,
}

pub fn class_invariants(b: [u32; 3]) -> ClassInvariants {
    let n = (b[0] + b[1] + b[2]) as i64;
    let sq: i64 = b.iter().map(|&x| (x as i64) * (x as i64)).sum();
    let ga = n * (n - 1) / 2 - sq + 1;
    ClassInvariants { degree: n, arithmetic_genus: ga, expected_moduli: n + ga }
}

/// Plane degree and base-point multiplicities of a curve of type `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeConditions {
    pub degree: usize,
    pub points: Vec<(String, ProjPoint, usize)>,
}

impl TypeConditions {
    pub fn equation_count(&self) -> usize {
        self.points.iter().map(|(_, _, m)| m * (m + 1) / 2).sum()
    }
}

pub fn type_to_linear_conditions(b: [u32; 3], cfg: &LineConfig) -> TypeConditions {
    let class = CurveClass::from_type(b);
    let points = BASE_PAIRS
        .iter()
        .map(|&(i, j)| (base_point_name((i, j)), cfg.base_point(i, j).clone(), class.beta_of(i, j) as usize))
        .filter(|(_, _, m)| *m > 0)
        .collect();
    TypeConditions { degree: class.alpha as usize, points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
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

    #[test]
    fn parametrization_lands_on_cayley() {
        for seed in 0..3 {
            let c = cfg(seed);
            let det = cayley_bundle(c.field()).discriminant();
            assert!(det.substitute(&c.parametrization()).unwrap().is_zero());
        }
    }

    #[test]
    fn concurrent_lines_rejected() {
        let f = fp(101);
        let v = Vars::p2();
        let l = |s: &str| MultiPoly::parse(s, &v, f, true).unwrap();
        let r = LineConfig::new([l("u"), l("v"), l("u + v"), l("w")], &l("u + 2*v + 5*w"));
        assert!(matches!(r, Err(CayleyError::DegenerateConfig(_))));
    }

    #[test]
    fn contact_identity() {
        let c = cfg(7);
        let a = c.cayley_matrix();
        assert!(a.discriminant().proportional(&cayley_bundle(c.field()).discriminant()).is_some());
        let (q, lc) = contact_line_from_minor(&a, &c, 0).unwrap();
        assert_eq!(lc, *c.contact());
        assert!(q.proportional(&c.contact_quadric()).is_some());
        let lhs = q.substitute(&c.parametrization()).unwrap();
        let rhs = lc.mul(&lc).mul(&c.line_product());
        assert!(lhs.proportional(&rhs).is_some());
        for node in cayley_nodes(c.field()) {
            assert!(q.vanishes_at(&node));
        }
    }

    #[test]
    fn standard_minor_is_degenerate() {
        // the diagonal minors of the standard matrix split into planes and
        // their contact line runs through a base point
        let c = cfg(2);
        let std = cayley_bundle(c.field());
        let (q, lc) = contact_line_from_minor(&std, &c, 0).unwrap();
        assert_eq!(q.to_string(), "X0^2 - X3^2");
        assert!(c.base_points().iter().any(|pt| lc.vanishes_at(pt)));
    }

    #[test]
    fn file_round_trip() {
        let c = cfg(5);
        let back = c.to_file().to_config().unwrap();
        assert_eq!(back.contact(), c.contact());
        assert_eq!(back.cayley_matrix(), c.cayley_matrix());
    }

    #[test]
    fn cubics_through_base_points() {
        let c = cfg(3);
        for x in c.parametrization() {
            for pt in c.base_points() {
                assert!(x.vanishes_at(pt));
            }
        }
    }

    #[test]
    fn table_rows() {
        let rows = [
            ([1, 0, 0], 1, 0),
            ([1, 1, 0], 2, 0),
            ([1, 1, 1], 3, 1),
            ([2, 1, 1], 4, 1),
            ([2, 2, 2], 6, 4),
            ([1, 2, 3], 6, 2),
        ];
        for (b, d, g) in rows {
            let inv = class_invariants(b);
            assert_eq!((inv.degree, inv.arithmetic_genus), (d, g), "{b:?}");
        }
        assert_eq!(class_invariants([1, 2, 3]).expected_moduli, 8);
    }

    #[test]
    fn node_avoidance() {
        assert!(CurveClass { alpha: 3, beta: [1; 6] }.avoids_nodes());
        assert!(!CurveClass { alpha: 1, beta: [1, 0, 0, 0, 0, 0] }.avoids_nodes());
        for b in [[1, 2, 3], [2, 3, 1], [0, 0, 1], [4, 4, 4]] {
            assert!(CurveClass::from_type(b).avoids_nodes());
        }
    }

    #[test]
    fn type_conditions() {
        let c = cfg(1);
        let t = type_to_linear_conditions([1, 2, 3], &c);
        assert_eq!(t.degree, 6);
        assert_eq!(t.equation_count(), 20);
        let mults: Vec<(String, usize)> = t.points.iter().map(|(n, _, m)| (n.clone(), *m)).collect();
        assert!(mults.contains(&("E14".into(), 1)) && mults.contains(&("E13".into(), 2)));
        assert!(mults.contains(&("E12".into(), 3)) && mults.contains(&("E34".into(), 3)));
        let t = type_to_linear_conditions([0, 0, 1], &c);
        assert_eq!(t.degree, 1);
        assert_eq!(t.points.len(), 2);
    }
}
