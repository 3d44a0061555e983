//! Symmetric 3x3 polynomial matrices of graded-free type, read as conic
//! bundles over projective space: degree shapes, determinant, adjugate and
//! fiberwise rank/splitting data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::Fp;
use crate::linalg::Matrix;
use crate::poly::{MultiPoly, PolyError, ProjPoint, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConicError {
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("not of graded free type: {0}")]
    NotGradedFree(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberType {
    SmoothConic,
    SplitPair,
    NonsplitPair,
    DoubleLine,
    WholePlane,
}

impl FiberType {
    pub fn rank(self) -> usize {
        match self {
            FiberType::SmoothConic => 3,
            FiberType::SplitPair | FiberType::NonsplitPair => 2,
            FiberType::DoubleLine => 1,
            FiberType::WholePlane => 0,
        }
    }
}

/// Degree triple (d1,d2,d3) compatible with the entry degrees, if unique.
pub fn validate_graded_type(entries: &[[MultiPoly; 3]; 3]) -> Result<[usize; 3], ConicError> {
    for i in 0..3 {
        for j in 0..3 {
            if entries[i][j] != entries[j][i] {
                return Err(ConicError::NotSymmetric(i, j));
            }
            if !entries[i][j].is_homogeneous() {
                return Err(ConicError::Poly(PolyError::Inhomogeneous));
            }
        }
    }
    let deg = |i: usize, j: usize| entries[i][j].homogeneous_degree();
    let bound = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter_map(|(i, j)| deg(i, j))
        .max()
        .ok_or_else(|| ConicError::NotGradedFree("zero matrix".into()))?
        * 2;
    let mut found = Vec::new();
    for d0 in 0..=bound {
        for d1 in 0..=bound {
            for d2 in 0..=bound {
                let d = [d0, d1, d2];
                if d0 % 2 != d1 % 2 || d1 % 2 != d2 % 2 {
                    continue;
                }
                let ok = (0..3).all(|i| {
                    (i..3).all(|j| match deg(i, j) {
                        None => true,
                        Some(e) => 2 * e == d[i] + d[j],
                    })
                });
                if ok {
                    found.push(d);
                }
            }
        }
    }
    match found.as_slice() {
        [d] => Ok(*d),
        [] => Err(ConicError::NotGradedFree("no consistent degree triple".into())),
        _ => Err(ConicError::NotGradedFree("degree triple not determined by the entries".into())),
    }
}

/// Entry degree table implied by a type triple.
pub fn degree_shape(d: [usize; 3]) -> [[usize; 3]; 3] {
    let mut s = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            s[i][j] = (d[i] + d[j]) / 2;
        }
    }
    s
}

fn det3(m: &[[MultiPoly; 3]; 3]) -> MultiPoly {
    let c0 = m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1]));
    let c1 = m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]));
    let c2 = m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]));
    m[0][0].mul(&c0).sub(&m[0][1].mul(&c1)).add(&m[0][2].mul(&c2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedConicBundle {
    entries: [[MultiPoly; 3]; 3],
    dtype: [usize; 3],
}

impl GradedConicBundle {
    pub fn new(entries: [[MultiPoly; 3]; 3]) -> Result<Self, ConicError> {
        let f = entries[0][0].field();
        let v = entries[0][0].vars().clone();
        for row in &entries {
            for e in row {
                if e.field() != f || *e.vars() != v {
                    return Err(ConicError::Poly(PolyError::VariableMismatch));
                }
            }
        }
        let dtype = validate_graded_type(&entries)?;
        Ok(GradedConicBundle { entries, dtype })
    }

    /// Build from the upper triangle a00,a01,a02,a11,a12,a22.
    pub fn from_upper(upper: [MultiPoly; 6]) -> Result<Self, ConicError> {
        let [a00, a01, a02, a11, a12, a22] = upper;
        GradedConicBundle::new([
            [a00, a01.clone(), a02.clone()],
            [a01, a11, a12.clone()],
            [a02, a12, a22],
        ])
    }

    pub fn parse_upper(texts: &[&str; 6], vars: &Vars, field: Fp) -> Result<Self, ConicError> {
        let mut polys = Vec::with_capacity(6);
        for t in texts {
            polys.push(MultiPoly::parse(t, vars, field, true)?);
        }
        GradedConicBundle::from_upper(polys.try_into().unwrap())
    }

    pub fn entries(&self) -> &[[MultiPoly; 3]; 3] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i][j]
    }

    pub fn upper(&self) -> [MultiPoly; 6] {
        let e = &self.entries;
        [e[0][0].clone(), e[0][1].clone(), e[0][2].clone(), e[1][1].clone(), e[1][2].clone(), e[2][2].clone()]
    }

    pub fn graded_type(&self) -> [usize; 3] {
        self.dtype
    }

    pub fn degree_shape(&self) -> [[usize; 3]; 3] {
        degree_shape(self.dtype)
    }

    pub fn field(&self) -> Fp {
        self.entries[0][0].field()
    }

    pub fn vars(&self) -> &Vars {
        self.entries[0][0].vars()
    }

    pub fn discriminant(&self) -> MultiPoly {
        det3(&self.entries)
    }

    /// Lower-right 2x2 minor a11*a22 - a12^2.
    pub fn lower_right_minor(&self) -> MultiPoly {
        self.adjugate()[0][0].clone()
    }

    /// The six distinct 2x2 minors of the symmetric matrix.
    pub fn minors2(&self) -> Vec<MultiPoly> {
        let e = &self.entries;
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let mut out = Vec::new();
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for &(k, l) in &pairs[a..] {
                out.push(e[i][k].mul(&e[j][l]).sub(&e[i][l].mul(&e[j][k])));
            }
        }
        out
    }

    pub fn adjugate(&self) -> [[MultiPoly; 3]; 3] {
        let m = &self.entries;
        let cof = |r: usize, c: usize| {
            let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
            let minor = m[rs[0]][cs[0]].mul(&m[rs[1]][cs[1]]).sub(&m[rs[0]][cs[1]].mul(&m[rs[1]][cs[0]]));
            if (r + c) % 2 == 0 {
                minor
            } else {
                minor.neg()
            }
        };
        std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i)))
    }

    /// Compose every entry with the given images.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<GradedConicBundle, ConicError> {
        let mut out: Vec<MultiPoly> = Vec::with_capacity(6);
        for e in self.upper() {
            out.push(e.substitute(images)?);
        }
        GradedConicBundle::from_upper(out.try_into().unwrap())
    }

    /// Scalar matrix at a point.
    pub fn eval_at(&self, pt: &ProjPoint) -> Matrix {
        let f = self.field();
        let rows = (0..3).map(|i| (0..3).map(|j| self.entries[i][j].eval(pt.coords())).collect()).collect();
        Matrix::from_rows(f, rows)
    }

    pub fn rank_at_point(&self, pt: &ProjPoint) -> Result<usize, ConicError> {
        check_dim(self.vars(), pt)?;
        Ok(self.eval_at(pt).rank())
    }

    pub fn classify_fiber(&self, pt: &ProjPoint) -> Result<FiberType, ConicError> {
        check_dim(self.vars(), pt)?;
        Ok(classify_scalar(&self.eval_at(pt)))
    }

    /// Points of `domain` where the rank is at most `r`, sorted.
    pub fn rank_locus_scan<I>(&self, r: usize, domain: I) -> Vec<ProjPoint>
    where
        I: Iterator<Item = ProjPoint> + Send,
    {
        let mut out: Vec<ProjPoint> =
            domain.par_bridge().filter(|pt| self.eval_at(pt).rank() <= r).collect();
        out.sort();
        out
    }
}

fn check_dim(vars: &Vars, pt: &ProjPoint) -> Result<(), ConicError> {
    if pt.dim() != vars.len() {
        return Err(PolyError::DimensionMismatch { expected: vars.len(), got: pt.dim() }.into());
    }
    Ok(())
}

/// Fiber type of a scalar symmetric 3x3 matrix.
pub fn classify_scalar(m: &Matrix) -> FiberType {
    let f = m.field();
    match m.rank() {
        3 => FiberType::SmoothConic,
        1 => FiberType::DoubleLine,
        0 => FiberType::WholePlane,
        _ => {
            // restrict the form to a complement of its kernel: two coordinate
            // vectors independent from the kernel vector give a nondegenerate
            // binary form whose determinant is ab up to squares
            let k = &m.kernel()[0];
            let (i, j) = [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .find(|&(i, j)| {
                    let t = 3 - i - j;
                    k[t] != 0
                })
                .unwrap();
            let g = f.sub(f.mul(m.get(i, i), m.get(j, j)), f.mul(m.get(i, j), m.get(i, j)));
            if f.is_square(f.neg(g)) {
                FiberType::SplitPair
            } else {
                FiberType::NonsplitPair
            }
        }
    }
}

/// All points of P^n(F_p) in canonical form, n = dim - 1.
pub fn projective_points(field: Fp, dim: usize) -> impl Iterator<Item = ProjPoint> + Send {
    let p = field.modulus();
    (0..dim).flat_map(move |lead| {
        let free = dim - 1 - lead;
        let count = p.pow(free as u32);
        (0..count).map(move |mut idx| {
            let mut c = vec![0u64; dim];
            c[lead] = 1;
            for t in (lead + 1..dim).rev() {
                c[t] = idx % p;
                idx /= p;
            }
            ProjPoint::new(field, &c).unwrap()
        })
    })
}

/// Bundle file record: modulus, variable names, optional type, and either the
/// upper triangle (6 entries) or the full matrix row by row (9 entries).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleFile {
    pub p: u64,
    pub variables: Vec<String>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub dtype: Option<[usize; 3]>,
    pub entries: Vec<String>,
}

impl BundleFile {
    pub fn from_bundle(m: &GradedConicBundle) -> Self {
        BundleFile {
            p: m.field().modulus(),
            variables: m.vars().names().to_vec(),
            dtype: Some(m.graded_type()),
            entries: m.upper().iter().map(|e| e.to_string()).collect(),
        }
    }

    pub fn to_bundle(&self) -> Result<GradedConicBundle, ConicError> {
        let field = Fp::new(self.p).map_err(PolyError::from)?;
        let vars = Vars::new(&self.variables)?;
        let polys = self
            .entries
            .iter()
            .map(|s| MultiPoly::parse(s, &vars, field, true))
            .collect::<Result<Vec<_>, _>>()?;
        let m = match polys.len() {
            6 => GradedConicBundle::from_upper(polys.try_into().unwrap())?,
            9 => {
                let mut it = polys.into_iter();
                let mut row = || [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
                GradedConicBundle::new([row(), row(), row()])?
            }
            n => return Err(ConicError::NotGradedFree(format!("{n} entries (need 6 or 9)"))),
        };
        if let Some(d) = self.dtype {
            if d != m.graded_type() {
                return Err(ConicError::NotGradedFree(format!(
                    "declared type {:?} but entries give {:?}",
                    d,
                    m.graded_type()
                )));
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn diag(f: Fp, texts: [&str; 3]) -> GradedConicBundle {
        let v = Vars::p3();
        GradedConicBundle::parse_upper(&[texts[0], "0", "0", texts[1], "0", texts[2]], &v, f).unwrap()
    }

    #[test]
    fn diagonal_det_and_adjugate() {
        let f = fp(101);
        let m = diag(f, ["S", "T", "U"]);
        assert_eq!(m.graded_type(), [1, 1, 1]);
        assert_eq!(m.discriminant().to_string(), "S*T*U");
        let adj = m.adjugate();
        assert_eq!(adj[0][0].to_string(), "T*U");
        assert_eq!(adj[1][1].to_string(), "S*U");
        assert_eq!(adj[2][2].to_string(), "S*T");
        assert!(adj[0][1].is_zero());
    }

    #[test]
    fn mixed_shape() {
        let f = fp(101);
        let v = Vars::p3();
        let m = GradedConicBundle::parse_upper(
            &["S^7", "T^4", "U^4", "V", "S", "T"],
            &v,
            f,
        )
        .unwrap();
        assert_eq!(m.graded_type(), [7, 1, 1]);
        assert_eq!(m.degree_shape(), [[7, 4, 4], [4, 1, 1], [4, 1, 1]]);
        let bad = GradedConicBundle::parse_upper(&["S^7", "T^3", "U^4", "V", "S", "T"], &v, f);
        assert!(matches!(bad, Err(ConicError::NotGradedFree(_))));
    }

    #[test]
    fn asymmetric_rejected() {
        let f = fp(7);
        let v = Vars::p3();
        let p = |s: &str| MultiPoly::parse(s, &v, f, true).unwrap();
        let e = [[p("S"), p("T"), p("0")], [p("U"), p("S"), p("0")], [p("0"), p("0"), p("S")]];
        assert_eq!(GradedConicBundle::new(e), Err(ConicError::NotSymmetric(0, 1)));
    }

    #[test]
    fn fiber_classes() {
        let f = fp(7);
        let m = |rows: Vec<Vec<i64>>| {
            Matrix::from_rows(f, rows.into_iter().map(|r| r.into_iter().map(|x| f.from_i64(x)).collect()).collect())
        };
        assert_eq!(classify_scalar(&m(vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]])), FiberType::DoubleLine);
        assert_eq!(classify_scalar(&m(vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 0]])), FiberType::SplitPair);
        // x^2 + y^2 over F_7: -1 is not a square
        assert_eq!(classify_scalar(&m(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]])), FiberType::NonsplitPair);
        assert_eq!(classify_scalar(&m(vec![vec![0; 3]; 3])), FiberType::WholePlane);
        assert_eq!(classify_scalar(&m(vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]])), FiberType::SplitPair);
    }

    #[test]
    fn point_enumeration_counts() {
        let f = fp(7);
        assert_eq!(projective_points(f, 3).count(), 57);
        assert_eq!(projective_points(f, 4).count(), 400);
        let mut pts: Vec<_> = projective_points(f, 3).collect();
        pts.dedup();
        assert_eq!(pts.len(), 57);
    }

    #[test]
    fn bundle_file_round_trip() {
        let m = diag(fp(101), ["S", "T", "U"]);
        let file = BundleFile::from_bundle(&m);
        let json = serde_json::to_string(&file).unwrap();
        let back: BundleFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_bundle().unwrap(), m);
        let full = |a01: &str| BundleFile {
            p: 101,
            variables: ["S", "T", "U", "V"].map(String::from).to_vec(),
            dtype: None,
            entries: ["S", a01, "0", "0", "T", "0", "0", "0", "U"].map(String::from).to_vec(),
        };
        assert_eq!(full("0").to_bundle().unwrap(), m);
        assert!(matches!(full("T").to_bundle(), Err(ConicError::NotSymmetric(_, _))));
    }
}
