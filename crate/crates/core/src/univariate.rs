//! Dense univariate polynomials over F_p.
//!
//! Used for everything that happens on a line: root extraction for point
//! enumeration, square-free decomposition of binary forms, and resultants.

use crate::gf::Fp;

/// Coefficients are stored low degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Fp,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: Fp, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.modulus();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Fp) -> Self {
        UniPoly { field, coeffs: vec![] }
    }

    pub fn constant(field: Fp, c: u64) -> Self {
        UniPoly::new(field, vec![c])
    }

    /// x - r
    pub fn linear_root(field: Fp, r: u64) -> Self {
        UniPoly::new(field, vec![field.neg(r), 1])
    }

    pub fn x(field: Fp) -> Self {
        UniPoly::new(field, vec![0, 1])
    }

    pub fn from_roots(field: Fp, roots: &[u64]) -> Self {
        roots
            .iter()
            .fold(UniPoly::constant(field, 1), |acc, &r| acc.mul(&UniPoly::linear_root(field, r)))
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.field.add(self.coeff(i), o.coeff(i))).collect();
        UniPoly::new(self.field, c)
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.field.sub(self.coeff(i), o.coeff(i))).collect();
        UniPoly::new(self.field, c)
    }

    pub fn scale(&self, s: u64) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|&c| self.field.mul(c, s)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.field);
        }
        let f = &self.field;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(self.field, out)
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, i as u64 % f.modulus()))
            .collect();
        UniPoly::new(self.field, c)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.lc()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(self.field), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, dc));
            }
        }
        r.truncate(dd);
        (UniPoly::new(self.field, q), UniPoly::new(self.field, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self` divides `o` exactly.
    pub fn divides(&self, o: &UniPoly) -> bool {
        o.rem(self).is_zero()
    }

    pub fn powmod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m);
        let mut acc = UniPoly::constant(self.field, 1).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in F_p, ascending.
    pub fn roots(&self) -> Vec<u64> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let f = self.field;
        let p = f.modulus();
        let m = self.monic();
        // product of distinct linear factors: gcd(f, x^p - x)
        let xp = UniPoly::x(f).powmod(p, &m);
        let g = m.gcd(&xp.sub(&UniPoly::x(f)));
        let mut out = Vec::new();
        split_linear(&g, 0, &mut out);
        out.sort_unstable();
        out
    }

    /// Yun's square-free decomposition: pairs (g_i, i) with self = lc * prod g_i^i.
    /// Only meaningful when deg < p.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a_i = b.gcd(&d);
            if a_i.degree().unwrap_or(0) > 0 {
                out.push((a_i.clone(), i));
            }
            b = b.divrem(&a_i).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&a_i).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Square-free part (monic), valid when deg < p.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(field: Fp, xs: &[u64], ys: &[u64]) -> UniPoly {
        let master = UniPoly::from_roots(field, xs);
        let n = xs.len();
        let mut acc = vec![0u64; n];
        for (&xi, &yi) in xs.iter().zip(ys) {
            if yi == 0 {
                continue;
            }
            // master / (x - xi) by synthetic division
            let mut q = vec![0u64; n];
            let mut carry = 0u64;
            for k in (0..n).rev() {
                carry = field.add(master.coeff(k + 1), field.mul(carry, xi));
                q[k] = carry;
            }
            let den = q.iter().rev().fold(0u64, |a, &c| field.add(field.mul(a, xi), c));
            let s = field.div(yi, den).expect("distinct interpolation nodes");
            for (a, c) in acc.iter_mut().zip(&q) {
                *a = field.add(*a, field.mul(s, *c));
            }
        }
        UniPoly::new(field, acc)
    }
}

/// Resultant of two polynomials taken with *formal* degrees `da >= deg a`,
/// `db >= deg b`, i.e. the determinant of the Sylvester matrix of that size.
pub fn sylvester_resultant(a: &UniPoly, da: usize, b: &UniPoly, db: usize) -> u64 {
    let f = a.field();
    let n = da + db;
    if n == 0 {
        return 1;
    }
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..db {
        for k in 0..=da {
            m[i][i + k] = a.coeff(da - k);
        }
    }
    for i in 0..da {
        for k in 0..=db {
            m[db + i][i + k] = b.coeff(db - k);
        }
    }
    crate::linalg::Matrix::from_rows(f, m).det()
}

/// Sylvester resultant over F_p[x]: `a[k]`, `b[k]` are the coefficients of
/// z^k, formal degrees `da`, `db`. Fraction-free (Bareiss) elimination.
pub fn sylvester_resultant_poly(a: &[UniPoly], da: usize, b: &[UniPoly], db: usize) -> UniPoly {
    let field = a.first().or(b.first()).map(|u| u.field()).expect("nonempty coefficient lists");
    let n = da + db;
    let one = UniPoly::constant(field, 1);
    if n == 0 {
        return one;
    }
    let zero = UniPoly::zero(field);
    let get = |v: &[UniPoly], k: usize| v.get(k).cloned().unwrap_or_else(|| zero.clone());
    let mut m = vec![vec![zero.clone(); n]; n];
    for i in 0..db {
        for k in 0..=da {
            m[i][i + k] = get(a, da - k);
        }
    }
    for i in 0..da {
        for k in 0..=db {
            m[db + i][i + k] = get(b, db - k);
        }
    }
    let mut prev = one;
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return zero;
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                let (q, r) = num.divrem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                m[i][j] = q;
            }
            m[i][k] = zero.clone();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.scale(field.neg(1))
    } else {
        d
    }
}

fn split_linear(g: &UniPoly, mut shift: u64, out: &mut Vec<u64>) {
    let f = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push(f.neg(m.coeff(0)));
        }
        Some(_) => {
            let p = f.modulus();
            loop {
                // gcd(g, (x+a)^((p-1)/2) - 1) splits g unless unlucky in a
                let xa = UniPoly::new(f, vec![shift % p, 1]);
                let h = xa.powmod((p - 1) / 2, g).sub(&UniPoly::constant(f, 1));
                let d = g.gcd(&h);
                shift += 1;
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < g.degree().unwrap() {
                    let other = g.divrem(&d).0;
                    split_linear(&d, shift, out);
                    split_linear(&other, shift, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn roots_match_brute_force() {
        let fl = f(101);
        let p = UniPoly::from_roots(fl, &[3, 3, 7, 50, 0]).mul(&UniPoly::new(fl, vec![2, 0, 1]));
        let brute: Vec<u64> = (0..101).filter(|&x| p.eval(x) == 0).collect();
        assert_eq!(p.roots(), brute);
    }

    #[test]
    fn divrem_and_gcd() {
        let fl = f(10007);
        let a = UniPoly::from_roots(fl, &[1, 2, 3]);
        let b = UniPoly::from_roots(fl, &[2, 3, 4]);
        assert_eq!(a.gcd(&b), UniPoly::from_roots(fl, &[2, 3]));
        let (q, r) = a.divrem(&UniPoly::linear_root(fl, 1));
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::from_roots(fl, &[2, 3]));
    }

    #[test]
    fn yun() {
        let fl = f(10007);
        let a = UniPoly::from_roots(fl, &[1, 2, 2, 5, 5, 5, 9, 9]).scale(7);
        let dec = a.squarefree_decomposition();
        let mults: Vec<usize> = dec.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert_eq!(dec[1].0, UniPoly::from_roots(fl, &[2, 9]));
        assert_eq!(a.squarefree_part(), UniPoly::from_roots(fl, &[1, 2, 5, 9]));
    }

    #[test]
    fn resultant_detects_common_root() {
        let fl = f(10007);
        let a = UniPoly::from_roots(fl, &[1, 2]);
        let b = UniPoly::from_roots(fl, &[2, 3, 4]);
        let c = UniPoly::from_roots(fl, &[5, 6, 7]);
        assert_eq!(sylvester_resultant(&a, 2, &b, 3), 0);
        // Res(prod(x-a_i), prod(x-b_j)) = prod(a_i - b_j)
        let expect = [1i64, 2]
            .iter()
            .flat_map(|&x| [5i64, 6, 7].map(move |y| x - y))
            .fold(1u64, |acc, d| fl.mul(acc, fl.from_i64(d)));
        assert_eq!(sylvester_resultant(&a, 2, &c, 3), expect);
    }

    #[test]
    fn interpolation() {
        let fl = f(97);
        let p = UniPoly::new(fl, vec![5, 0, 3, 1]);
        let xs: Vec<u64> = (10..14).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| p.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(fl, &xs, &ys), p);
    }
}
