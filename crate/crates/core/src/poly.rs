//! Sparse multivariate polynomials over F_p.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! reverse lexicographic, so iteration order (and therefore formatting and
//! division) is deterministic. The leading term is the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldElement, Fp, GfError};
use crate::linalg::Matrix;
use crate::univariate::UniPoly;

pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("variable sets or moduli differ")]
    VariableMismatch,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("substitution images have different degrees")]
    DegreeMismatch,
    #[error("not divisible; remainder has leading term {witness}")]
    NotDivisible { witness: String },
    #[error("the two points span no line")]
    DegeneratePoints,
    #[error("expected a nonzero linear form")]
    NotLinear,
    #[error("binary form is not a constant times a square")]
    NotAPerfectSquare,
    #[error("characteristic {p} too small for degree {degree}")]
    WildCharacteristic { p: u64, degree: usize },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("too many variables ({0}, max {MAX_VARS})")]
    TooManyVariables(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Exponent vector; unused trailing slots stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i] + o.0[i];
        }
        Monomial(m)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= o.0[i])
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        let mut m = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i] - o.0[i];
        }
        Monomial(m)
    }

    pub fn var(i: usize, e: u8) -> Monomial {
        let mut m = [0u8; MAX_VARS];
        m[i] = e;
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            other => return other,
        }
        // grevlex: the last differing exponent decides, smaller exponent is larger
        for i in (0..MAX_VARS).rev() {
            if self.0[i] != o.0[i] {
                return o.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// All monomials of total degree `d` in `n` variables, descending grevlex.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: usize, cur: &mut [u8; MAX_VARS], out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur[i] = left as u8;
            out.push(Monomial(*cur));
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e as u8;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::default());
        }
        return out;
    }
    rec(n, 0, d, &mut [0u8; MAX_VARS], &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Ordered variable names, shared cheaply between polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, PolyError> {
        if names.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(names.len()));
        }
        Ok(Vars(Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())))
    }

    pub fn p3() -> Self {
        Vars::new(&["S", "T", "U", "V"]).unwrap()
    }

    pub fn cayley() -> Self {
        Vars::new(&["X0", "X1", "X2", "X3"]).unwrap()
    }

    pub fn p2() -> Self {
        Vars::new(&["u", "v", "w"]).unwrap()
    }

    /// Coordinates (l:m) on a line.
    pub fn binary() -> Self {
        Vars::new(&["l", "m"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

/// A point of P^n(F_p), normalized so the first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<u64>,
    p: u64,
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl ProjPoint {
    pub fn new(field: Fp, coords: &[u64]) -> Option<Self> {
        let mut c: Vec<u64> = coords.iter().map(|&x| x % field.modulus()).collect();
        let first = c.iter().position(|&x| x != 0)?;
        let inv = field.inv(c[first]).unwrap();
        for x in c.iter_mut() {
            *x = field.mul(*x, inv);
        }
        Some(ProjPoint { coords: c, p: field.modulus() })
    }

    pub fn from_signed(field: Fp, coords: &[i64]) -> Option<Self> {
        let c: Vec<u64> = coords.iter().map(|&x| field.from_i64(x)).collect();
        ProjPoint::new(field, &c)
    }

    pub fn from_elements(coords: &[FieldElement]) -> Result<Option<Self>, GfError> {
        let Some(first) = coords.first() else {
            return Ok(None);
        };
        let field = first.field();
        for c in coords {
            if c.modulus() != field.modulus() {
                return Err(GfError::ModulusMismatch(field.modulus(), c.modulus()));
            }
        }
        let raw: Vec<u64> = coords.iter().map(|c| c.value()).collect();
        Ok(ProjPoint::new(field, &raw))
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.p).expect("validated at construction")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fl = self.field();
        write!(f, "(")?;
        for (i, &c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{}", fl.to_signed(c))?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Fp,
    vars: Vars,
    terms: BTreeMap<Monomial, u64>,
}

impl MultiPoly {
    pub fn zero(field: Fp, vars: &Vars) -> Self {
        MultiPoly { field, vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: Fp, vars: &Vars, c: u64) -> Self {
        let mut p = MultiPoly::zero(field, vars);
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn var(field: Fp, vars: &Vars, i: usize) -> Self {
        let mut p = MultiPoly::zero(field, vars);
        p.add_term(Monomial::var(i, 1), 1);
        p
    }

    /// Linear form sum c_i x_i.
    pub fn linear(field: Fp, vars: &Vars, coeffs: &[u64]) -> Self {
        let mut p = MultiPoly::zero(field, vars);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(i, 1), c);
        }
        p
    }

    pub fn from_terms(field: Fp, vars: &Vars, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let mut p = MultiPoly::zero(field, vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Polynomial with the given coefficients on a monomial list.
    pub fn from_coeff_vector(field: Fp, vars: &Vars, monos: &[Monomial], coeffs: &[u64]) -> Self {
        MultiPoly::from_terms(field, vars, monos.iter().copied().zip(coeffs.iter().copied()))
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) {
        let c = c % self.field.modulus();
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e = self.field.add(*e, c);
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &u64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree if homogeneous; `None` for zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn compatible(&self, o: &MultiPoly) -> Result<(), PolyError> {
        if self.field != o.field || self.vars != o.vars {
            return Err(PolyError::VariableMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, o: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, *c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, o: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, self.field.neg(*c));
        }
        Ok(r)
    }

    pub fn try_mul(&self, o: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(o)?;
        let f = self.field;
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = f.add(*e, f.mul(*ca, *cb));
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(MultiPoly { field: f, vars: self.vars.clone(), terms: acc })
    }

    // Panicking shorthands for internal code where compatibility is an invariant.
    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        self.try_add(o).expect("polynomial ring mismatch")
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.try_sub(o).expect("polynomial ring mismatch")
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        self.try_mul(o).expect("polynomial ring mismatch")
    }

    pub fn scale(&self, s: u64) -> MultiPoly {
        let f = self.field;
        MultiPoly::from_terms(f, &self.vars, self.terms.iter().map(|(m, c)| (*m, f.mul(*c, s))))
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(1))
    }

    pub fn pow(&self, e: usize) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.field, &self.vars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).unwrap()),
        }
    }

    /// Evaluate at raw coordinates.
    pub fn eval(&self, x: &[u64]) -> u64 {
        let f = self.field;
        let n = self.nvars();
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for i in 0..n {
                if m.0[i] > 0 {
                    t = f.mul(t, f.pow(x[i], m.0[i] as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    pub fn evaluate(&self, pt: &ProjPoint) -> Result<FieldElement, PolyError> {
        if pt.dim() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: pt.dim() });
        }
        if pt.field() != self.field {
            return Err(PolyError::VariableMismatch);
        }
        Ok(self.field.from_raw(self.eval(pt.coords())))
    }

    pub fn vanishes_at(&self, pt: &ProjPoint) -> bool {
        self.eval(pt.coords()) == 0
    }

    /// Compose with `images[i]` in place of variable i. The images must share one
    /// ring and, when homogeneous output is expected, one degree.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for im in images {
            first.compatible(im)?;
        }
        let degs: Vec<Option<usize>> = images.iter().map(|im| im.homogeneous_degree()).collect();
        let nonzero: Vec<usize> = degs.iter().flatten().copied().collect();
        if images.iter().any(|im| !im.is_homogeneous()) || nonzero.windows(2).any(|w| w[0] != w[1]) {
            return Err(PolyError::DegreeMismatch);
        }
        let tv = first.vars.clone();
        let f = self.field;
        let mut powers: Vec<Vec<MultiPoly>> =
            images.iter().map(|_| vec![MultiPoly::constant(f, &tv, 1)]).collect();
        let mut acc = MultiPoly::zero(f, &tv);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(f, &tv, *c);
            for i in 0..self.nvars() {
                let e = m.0[i] as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn partial(&self, var: usize) -> MultiPoly {
        let f = self.field;
        let mut out = MultiPoly::zero(f, &self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut nm = *m;
            nm.0[var] -= 1;
            out.add_term(nm, f.mul(*c, e as u64 % f.modulus()));
        }
        out
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars()).map(|i| self.partial(i)).collect()
    }

    /// Exact quotient by single-divisor reduction in grevlex.
    pub fn exact_div(&self, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.compatible(g)?;
        let (lm, lc) = g.leading_term().ok_or(GfError::DivisionByZero(self.field.modulus()))?;
        let f = self.field;
        let lc_inv = f.inv(lc)?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(f, &self.vars);
        let mut leftover = MultiPoly::zero(f, &self.vars);
        while let Some((m, c)) = rem.leading_term() {
            if lm.divides(&m) {
                let qm = m.div(&lm);
                let qc = f.mul(c, lc_inv);
                quot.add_term(qm, qc);
                for (gm, gc) in &g.terms {
                    rem.add_term(gm.mul(&qm), f.neg(f.mul(qc, *gc)));
                }
            } else {
                rem.terms.remove(&m);
                leftover.add_term(m, c);
            }
        }
        if let Some((m, c)) = leftover.leading_term() {
            let single = MultiPoly::from_terms(f, &self.vars, [(m, c)]);
            return Err(PolyError::NotDivisible { witness: single.to_string() });
        }
        Ok(quot)
    }

    pub fn divides(&self, f: &MultiPoly) -> bool {
        f.exact_div(self).is_ok()
    }

    /// Scalar `c` with `self = c * other`, if one exists.
    pub fn proportional(&self, other: &MultiPoly) -> Option<u64> {
        if self.compatible(other).is_err() {
            return None;
        }
        match (self.leading_term(), other.leading_term()) {
            (None, None) => Some(1),
            (Some((ma, ca)), Some((mb, cb))) if ma == mb => {
                let c = self.field.div(ca, cb).ok()?;
                (other.scale(c) == *self).then_some(c)
            }
            _ => None,
        }
    }

    /// Rename into another ring with the same number of variables.
    pub fn with_vars(&self, vars: &Vars) -> MultiPoly {
        assert_eq!(vars.len(), self.nvars());
        MultiPoly { field: self.field, vars: vars.clone(), terms: self.terms.clone() }
    }

    /// Coefficients on a monomial list.
    pub fn coeff_vector(&self, monos: &[Monomial]) -> Vec<u64> {
        monos.iter().map(|m| self.coeff(m)).collect()
    }

    /// f(l*P + m*Q) as a binary form in (l:m).
    pub fn restrict_to_line(&self, p: &ProjPoint, q: &ProjPoint) -> Result<MultiPoly, PolyError> {
        let n = self.nvars();
        for pt in [p, q] {
            if pt.dim() != n {
                return Err(PolyError::DimensionMismatch { expected: n, got: pt.dim() });
            }
        }
        if p == q {
            return Err(PolyError::DegeneratePoints);
        }
        let bv = Vars::binary();
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| MultiPoly::linear(self.field, &bv, &[p.coords()[i], q.coords()[i]]))
            .collect();
        self.substitute_linear(&images)
    }

    /// Substitution where images are linear forms (zero images allowed).
    pub fn substitute_linear(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        let tv = images[0].vars().clone();
        let f = self.field;
        // zero images break the equal-degree check; patch them through a dummy path
        if images.iter().any(|im| im.is_zero()) {
            let mut acc = MultiPoly::zero(f, &tv);
            for (m, c) in &self.terms {
                let mut t = MultiPoly::constant(f, &tv, *c);
                for i in 0..self.nvars() {
                    for _ in 0..m.0[i] {
                        t = t.mul(&images[i]);
                    }
                }
                acc = acc.add(&t);
            }
            return Ok(acc);
        }
        self.substitute(images)
    }

    /// Restrict a form on P^n to the hyperplane `plane = 0`, eliminating the
    /// last variable with a nonzero coefficient. Returns the restricted form in
    /// the remaining variables (in order) and the linear embedding used.
    pub fn restrict_to_plane(&self, plane: &MultiPoly) -> Result<(MultiPoly, Vec<MultiPoly>), PolyError> {
        self.compatible(plane)?;
        if plane.homogeneous_degree() != Some(1) {
            return Err(PolyError::NotLinear);
        }
        let f = self.field;
        let n = self.nvars();
        let a: Vec<u64> = (0..n).map(|i| plane.coeff(&Monomial::var(i, 1))).collect();
        let k = (0..n).rev().find(|&i| a[i] != 0).ok_or(PolyError::NotLinear)?;
        let names: Vec<String> =
            self.vars.names().iter().enumerate().filter(|(i, _)| *i != k).map(|(_, s)| s.clone()).collect();
        let sub_vars = Vars::new(&names)?;
        let inv = f.inv(a[k])?;
        let mut images = Vec::with_capacity(n);
        let mut j = 0;
        for i in 0..n {
            if i == k {
                let coeffs: Vec<u64> =
                    (0..n).filter(|&t| t != k).map(|t| f.neg(f.mul(a[t], inv))).collect();
                images.push(MultiPoly::linear(f, &sub_vars, &coeffs));
            } else {
                images.push(MultiPoly::var(f, &sub_vars, j));
                j += 1;
            }
        }
        Ok((self.substitute_linear(&images)?, images))
    }

    /// Dehomogenize a binary form at the second variable: h(x, 1).
    pub fn binary_to_univariate(&self) -> UniPoly {
        assert_eq!(self.nvars(), 2);
        let d = self.total_degree().unwrap_or(0);
        let mut c = vec![0u64; d + 1];
        for (m, v) in &self.terms {
            c[m.0[0] as usize] = self.field.add(c[m.0[0] as usize], *v);
        }
        UniPoly::new(self.field, c)
    }

    /// Homogenize a univariate polynomial to a binary form of degree `d`.
    pub fn binary_from_univariate(u: &UniPoly, d: usize) -> MultiPoly {
        let f = u.field();
        let bv = Vars::binary();
        let mut out = MultiPoly::zero(f, &bv);
        for (i, &c) in u.coeffs().iter().enumerate() {
            let mut m = [0u8; MAX_VARS];
            m[0] = i as u8;
            m[1] = (d - i) as u8;
            out.add_term(Monomial(m), c);
        }
        out
    }

    /// Write a nonzero binary form as `c * e^2`.
    ///
    /// `e` is assembled from the square-free decomposition and verified by
    /// squaring; when `c` is a square it is folded into `e` and 1 is returned.
    pub fn sqrt_binary_form(&self) -> Result<(MultiPoly, FieldElement), PolyError> {
        let f = self.field;
        if self.nvars() != 2 {
            return Err(PolyError::DimensionMismatch { expected: 2, got: self.nvars() });
        }
        let d = self.homogeneous_degree().ok_or(PolyError::Inhomogeneous)?;
        if d % 2 == 1 {
            return Err(PolyError::NotAPerfectSquare);
        }
        if f.modulus() <= d as u64 {
            return Err(PolyError::WildCharacteristic { p: f.modulus(), degree: d });
        }
        let u = self.binary_to_univariate();
        let ud = u.degree().unwrap();
        // roots at infinity: multiplicity d - ud
        if (d - ud) % 2 == 1 {
            return Err(PolyError::NotAPerfectSquare);
        }
        let mut root = UniPoly::constant(f, 1);
        for (factor, mult) in u.squarefree_decomposition() {
            if mult % 2 == 1 {
                return Err(PolyError::NotAPerfectSquare);
            }
            for _ in 0..mult / 2 {
                root = root.mul(&factor);
            }
        }
        let mut e = MultiPoly::binary_from_univariate(&root, d / 2);
        let (_, lc_e2) = e.pow(2).leading_term().unwrap();
        let (_, lc_h) = self.leading_term().unwrap();
        let mut c = f.div(lc_h, lc_e2)?;
        if f.is_square(c) {
            e = e.scale(f.sqrt(c)?);
            c = 1;
        }
        if e.pow(2).scale(c) != *self {
            return Err(PolyError::NotAPerfectSquare);
        }
        Ok((e, f.from_raw(c)))
    }

    /// Parse the textual grammar. With `homogeneous`, reject mixed degrees.
    pub fn parse(text: &str, vars: &Vars, field: Fp, homogeneous: bool) -> Result<MultiPoly, PolyError> {
        let p = Parser { s: text.as_bytes(), pos: 0, vars, field }.parse()?;
        if homogeneous && !p.is_homogeneous() {
            return Err(PolyError::Inhomogeneous);
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let fl = self.field;
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let sc = fl.to_signed(*c);
            let mag = sc.unsigned_abs();
            match (k, sc < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != 1 || m.degree() == 0 {
                parts.push(mag.to_string());
            }
            for (i, name) in self.vars.names().iter().enumerate() {
                match m.0[i] {
                    0 => {}
                    1 => parts.push(name.clone()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a Vars,
    field: Fp,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn uint(&mut self) -> Result<u64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            let digit = (self.s[self.pos] - b'0') as u64;
            // reduce as we go so large literals stay exact mod p
            v = (v as u128 * 10 % self.field.modulus() as u128) as u64;
            v = self.field.add(v, digit % self.field.modulus());
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected unsigned integer");
        }
        Ok(v)
    }

    fn exponent(&mut self) -> Result<u8, PolyError> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u32 = 0;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            v = v * 10 + (self.s[self.pos] - b'0') as u32;
            if v > 255 {
                return self.err("exponent too large");
            }
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected exponent");
        }
        Ok(v as u8)
    }

    fn variable(&mut self) -> Result<usize, PolyError> {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        // longest matching name wins (X1 vs X10 style ambiguity)
        let best = self
            .vars
            .names()
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_bytes()))
            .max_by_key(|(_, n)| n.len());
        match best {
            Some((i, n)) => {
                let after = self.pos + n.len();
                if after < self.s.len() && (self.s[after].is_ascii_alphanumeric() || self.s[after] == b'_') {
                    return self.err("unknown variable");
                }
                self.pos = after;
                Ok(i)
            }
            None => self.err("expected variable"),
        }
    }

    fn varpow(&mut self, m: &mut Monomial) -> Result<(), PolyError> {
        let i = self.variable()?;
        let e = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.exponent()?
        } else {
            1
        };
        m.0[i] = m.0[i].checked_add(e).ok_or(PolyError::Syntax { pos: self.pos, msg: "exponent overflow".into() })?;
        Ok(())
    }

    fn term(&mut self) -> Result<(Monomial, u64), PolyError> {
        let mut m = Monomial::default();
        let mut c = 1u64;
        match self.peek() {
            Some(b) if b.is_ascii_digit() => c = self.uint()?,
            Some(_) => self.varpow(&mut m)?,
            None => return self.err("unexpected end of input"),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            if matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                let k = self.uint()?;
                c = self.field.mul(c, k);
            } else {
                self.varpow(&mut m)?;
            }
        }
        Ok((m, c))
    }

    fn parse(mut self) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(self.field, self.vars);
        let mut sign_neg = false;
        if self.peek() == Some(b'-') {
            sign_neg = true;
            self.pos += 1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if sign_neg { self.field.neg(c) } else { c });
            match self.peek() {
                None => break,
                Some(b'+') => sign_neg = false,
                Some(b'-') => sign_neg = true,
                Some(_) => return self.err("expected '+' or '-'"),
            }
            self.pos += 1;
        }
        Ok(out)
    }
}

/// Evaluation matrix of all degree-`d` monomials against a point list.
pub fn evaluation_matrix(field: Fp, nvars: usize, d: usize, pts: &[ProjPoint]) -> Matrix {
    let monos = monomials_of_degree(nvars, d);
    let rows = pts
        .iter()
        .map(|pt| {
            monos
                .iter()
                .map(|m| {
                    (0..nvars).fold(1u64, |acc, i| field.mul(acc, field.pow(pt.coords()[i], m.0[i] as u64)))
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn p3(s: &str, p: u64) -> MultiPoly {
        MultiPoly::parse(s, &Vars::p3(), fp(p), false).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = p3("S^2 - 2*V^2", 7);
        assert_eq!(f.coeff(&Monomial::var(0, 2)), 1);
        assert_eq!(f.coeff(&Monomial::var(3, 2)), 5);
        let node = MultiPoly::parse("X*Y - Z^2", &Vars::new(&["X", "Y", "Z"]).unwrap(), fp(7), true).unwrap();
        assert_eq!(node.homogeneous_degree(), Some(2));
        assert_eq!(
            MultiPoly::parse("S + T^2", &Vars::p3(), fp(7), true),
            Err(PolyError::Inhomogeneous)
        );
        assert!(matches!(
            MultiPoly::parse("S + * T", &Vars::p3(), fp(7), false),
            Err(PolyError::Syntax { pos: 4, .. })
        ));
        assert!(MultiPoly::parse("S + Q", &Vars::p3(), fp(7), false).is_err());
    }

    #[test]
    fn format_round_trip() {
        let f = p3("3*S^2*T - T*U*V + 5 + V", 10007);
        let s = f.to_string();
        assert_eq!(MultiPoly::parse(&s, &Vars::p3(), fp(10007), false).unwrap(), f);
        let g = MultiPoly::parse("-X1*X3 + 2*X0^2", &Vars::cayley(), fp(101), false).unwrap();
        assert_eq!(g.to_string(), "2*X0^2 - X1*X3");
    }

    #[test]
    fn arithmetic_examples() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let f = fp(101);
        let a = MultiPoly::parse("x + y", &v, f, true).unwrap();
        let b = MultiPoly::parse("x - y", &v, f, true).unwrap();
        assert_eq!(a.mul(&b), MultiPoly::parse("x^2 - y^2", &v, f, true).unwrap());
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(a.try_add(&p3("S", 101)), Err(PolyError::VariableMismatch));
    }

    #[test]
    fn exact_division() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let f = fp(101);
        let num = MultiPoly::parse("x^2 - y^2", &v, f, true).unwrap();
        let den = MultiPoly::parse("x - y", &v, f, true).unwrap();
        assert_eq!(num.exact_div(&den).unwrap().to_string(), "x + y");
        let bad = MultiPoly::parse("x^2 + y^2", &v, f, true).unwrap();
        let x = MultiPoly::parse("x", &v, f, true).unwrap();
        assert!(matches!(bad.exact_div(&x), Err(PolyError::NotDivisible { .. })));
    }

    #[test]
    fn line_restriction() {
        let f = fp(101);
        let v = Vars::p2();
        let p = ProjPoint::from_signed(f, &[0, 1, 0]).unwrap();
        let q = ProjPoint::from_signed(f, &[0, 0, 1]).unwrap();
        let x = MultiPoly::parse("u", &v, f, true).unwrap();
        assert!(x.restrict_to_line(&p, &q).unwrap().is_zero());
        let conic = MultiPoly::parse("u^2 - v*w", &v, f, true).unwrap();
        assert_eq!(conic.restrict_to_line(&p, &q).unwrap().to_string(), "-l*m");
        assert_eq!(conic.restrict_to_line(&p, &p), Err(PolyError::DegeneratePoints));
    }

    #[test]
    fn binary_square_roots() {
        let f7 = fp(7);
        let bv = Vars::binary();
        let h = MultiPoly::parse("l^4 - 2*l^2*m^2 + m^4", &bv, f7, true).unwrap();
        let (e, c) = h.sqrt_binary_form().unwrap();
        assert_eq!(c.value(), 1);
        assert_eq!(e.pow(2), h);
        let h = MultiPoly::parse("l^4", &bv, f7, true).unwrap();
        let (e, _) = h.sqrt_binary_form().unwrap();
        assert_eq!(e.to_string(), "l^2");
        let h = MultiPoly::parse("3*l^2*m^2", &bv, f7, true).unwrap();
        let (e, c) = h.sqrt_binary_form().unwrap();
        assert_eq!((e.to_string().as_str(), c.value()), ("l*m", 3));
        let h = MultiPoly::parse("l^2 - l*m", &bv, f7, true).unwrap();
        assert_eq!(h.sqrt_binary_form(), Err(PolyError::NotAPerfectSquare));
        let h = MultiPoly::parse("l^8", &bv, f7, true).unwrap();
        assert!(matches!(h.sqrt_binary_form(), Err(PolyError::WildCharacteristic { .. })));
    }

    #[test]
    fn monomial_listing() {
        assert_eq!(monomials_of_degree(3, 6).len(), 28);
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        let m = monomials_of_degree(3, 2);
        assert!(m.windows(2).all(|w| w[0] > w[1]));
    }
}
