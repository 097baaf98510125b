//! Univariate polynomials and binary forms over a [`Field`].

use crate::field::Field;

/// Dense univariate polynomial, coefficients in ascending degree, no
/// trailing zeros (the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly<E>(pub Vec<E>);

impl<E> UniPoly<E> {
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[E] {
        &self.0
    }
}

/// Homogeneous form of fixed degree `n` in `s, t`; `coeffs[a]` multiplies
/// `s^a t^(n-a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm<E> {
    pub degree: usize,
    pub coeffs: Vec<E>,
}

#[derive(Debug, Clone, Copy)]
pub struct PolyRing<F: Field> {
    pub field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn normalize(&self, mut v: Vec<F::Elem>) -> UniPoly<F::Elem> {
        while v.last().is_some_and(|c| self.field.is_zero(c)) {
            v.pop();
        }
        UniPoly(v)
    }

    pub fn zero(&self) -> UniPoly<F::Elem> {
        UniPoly(Vec::new())
    }

    pub fn one(&self) -> UniPoly<F::Elem> {
        self.normalize(vec![self.field.one()])
    }

    pub fn is_constant(&self, p: &UniPoly<F::Elem>) -> bool {
        p.0.len() <= 1
    }

    pub fn add(&self, a: &UniPoly<F::Elem>, b: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        let f = &self.field;
        let n = a.0.len().max(b.0.len());
        let v = (0..n)
            .map(|i| match (a.0.get(i), b.0.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.normalize(v)
    }

    pub fn neg(&self, a: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        UniPoly(a.0.iter().map(|c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &UniPoly<F::Elem>, b: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &UniPoly<F::Elem>, k: &F::Elem) -> UniPoly<F::Elem> {
        self.normalize(a.0.iter().map(|c| self.field.mul(c, k)).collect())
    }

    pub fn mul(&self, a: &UniPoly<F::Elem>, b: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let f = &self.field;
        let mut v = vec![f.zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(x, y));
            }
        }
        self.normalize(v)
    }

    pub fn pow(&self, a: &UniPoly<F::Elem>, e: u64) -> UniPoly<F::Elem> {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(
        &self,
        a: &UniPoly<F::Elem>,
        b: &UniPoly<F::Elem>,
    ) -> (UniPoly<F::Elem>, UniPoly<F::Elem>) {
        let f = &self.field;
        let db = b.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(&b.0[db]).expect("leading coefficient is nonzero");
        let mut r = a.0.clone();
        if r.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut q = vec![f.zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + db], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
            }
            q[k] = c;
        }
        r.truncate(db);
        (self.normalize(q), self.normalize(r))
    }

    /// `a / b` when the division is exact.
    pub fn exact_div(
        &self,
        a: &UniPoly<F::Elem>,
        b: &UniPoly<F::Elem>,
    ) -> Option<UniPoly<F::Elem>> {
        let (q, r) = self.divrem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self, a: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        match a.0.last() {
            None => self.zero(),
            Some(lead) => self.scale(
                a,
                &self.field.inv(lead).expect("nonzero leading coefficient"),
            ),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &UniPoly<F::Elem>, b: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            // monic remainders keep rational coefficients from blowing up
            let (_, r) = self.divrem(&x, &y);
            x = y;
            y = self.monic(&r);
        }
        self.monic(&x)
    }

    pub fn derivative(&self, a: &UniPoly<F::Elem>) -> UniPoly<F::Elem> {
        let f = &self.field;
        self.normalize(
            a.0.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, a: &UniPoly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        a.0.iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Squarefree decomposition of a nonzero polynomial: pairs `(g, i)` with
    /// `g` squarefree, monic and nonconstant such that `a = lc * prod g^i`.
    /// Multiplicities may repeat in positive characteristic; the factors are
    /// still pairwise coprime.
    pub fn squarefree_decomposition(&self, a: &UniPoly<F::Elem>) -> Vec<(UniPoly<F::Elem>, u64)> {
        assert!(!a.is_zero(), "squarefree decomposition of zero");
        let mut out = Vec::new();
        self.squarefree_into(&self.monic(a), 1, &mut out);
        out.sort_by(|x, y| x.1.cmp(&y.1).then(x.0.degree().cmp(&y.0.degree())));
        out
    }

    fn squarefree_into(
        &self,
        a: &UniPoly<F::Elem>,
        scale: u64,
        out: &mut Vec<(UniPoly<F::Elem>, u64)>,
    ) {
        if self.is_constant(a) {
            return;
        }
        let mut c = self.gcd(a, &self.derivative(a));
        let mut w = self.exact_div(a, &c).expect("gcd divides");
        let mut i = 1;
        while !self.is_constant(&w) {
            let y = self.gcd(&w, &c);
            let z = self.exact_div(&w, &y).expect("gcd divides");
            if !self.is_constant(&z) {
                out.push((self.monic(&z), i * scale));
            }
            i += 1;
            c = self.exact_div(&c, &y).expect("gcd divides");
            w = y;
        }
        if !self.is_constant(&c) {
            // Only reachable in characteristic p: c is a polynomial in x^p.
            let p = self.field.characteristic().get();
            assert!(p > 0, "characteristic zero leaves no p-th power part");
            let root = self.normalize(c.0.iter().step_by(p as usize).cloned().collect());
            self.squarefree_into(&root, scale * p, out);
        }
    }

    // Binary forms.

    pub fn form(&self, degree: usize, coeffs: Vec<F::Elem>) -> BinaryForm<F::Elem> {
        assert_eq!(
            coeffs.len(),
            degree + 1,
            "form of degree {degree} needs {} coefficients",
            degree + 1
        );
        BinaryForm { degree, coeffs }
    }

    /// `a*s + b*t`
    pub fn linear_form(&self, s_coeff: F::Elem, t_coeff: F::Elem) -> BinaryForm<F::Elem> {
        BinaryForm {
            degree: 1,
            coeffs: vec![t_coeff, s_coeff],
        }
    }

    pub fn constant_form(&self, c: F::Elem) -> BinaryForm<F::Elem> {
        BinaryForm {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn form_is_zero(&self, a: &BinaryForm<F::Elem>) -> bool {
        a.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn form_mul(
        &self,
        a: &BinaryForm<F::Elem>,
        b: &BinaryForm<F::Elem>,
    ) -> BinaryForm<F::Elem> {
        let f = &self.field;
        let mut v = vec![f.zero(); a.degree + b.degree + 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(x, y));
            }
        }
        BinaryForm {
            degree: a.degree + b.degree,
            coeffs: v,
        }
    }

    pub fn form_pow(&self, a: &BinaryForm<F::Elem>, e: u64) -> BinaryForm<F::Elem> {
        let mut acc = self.constant_form(self.field.one());
        for _ in 0..e {
            acc = self.form_mul(&acc, a);
        }
        acc
    }

    pub fn form_scale(&self, a: &BinaryForm<F::Elem>, k: &F::Elem) -> BinaryForm<F::Elem> {
        BinaryForm {
            degree: a.degree,
            coeffs: a.coeffs.iter().map(|c| self.field.mul(c, k)).collect(),
        }
    }

    /// `x*a + y*b` for forms of equal degree.
    pub fn form_combine(
        &self,
        x: &F::Elem,
        a: &BinaryForm<F::Elem>,
        y: &F::Elem,
        b: &BinaryForm<F::Elem>,
    ) -> BinaryForm<F::Elem> {
        assert_eq!(a.degree, b.degree, "combining forms of different degree");
        let f = &self.field;
        BinaryForm {
            degree: a.degree,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(p, q)| f.add(&f.mul(x, p), &f.mul(y, q)))
                .collect(),
        }
    }

    pub fn form_eval(&self, a: &BinaryForm<F::Elem>, s: &F::Elem, t: &F::Elem) -> F::Elem {
        let f = &self.field;
        let n = a.degree as u64;
        a.coeffs.iter().enumerate().fold(f.zero(), |acc, (i, c)| {
            if f.is_zero(c) {
                return acc;
            }
            let term = f.mul(c, &f.mul(&f.pow(s, i as u64), &f.pow(t, n - i as u64)));
            f.add(&acc, &term)
        })
    }

    /// `F(x, 1)` as a polynomial in `x = s/t`.
    pub fn dehomogenize(&self, a: &BinaryForm<F::Elem>) -> UniPoly<F::Elem> {
        self.normalize(a.coeffs.clone())
    }

    /// Multiplicity of the root `[1:0]`, i.e. the power of `t` dividing the form.
    pub fn infinity_multiplicity(&self, a: &BinaryForm<F::Elem>) -> usize {
        match self.dehomogenize(a).degree() {
            Some(d) => a.degree - d,
            None => a.degree,
        }
    }

    /// Exact division by `s_k * t - t_k * s`, the form vanishing at `[s_k : t_k]`.
    pub fn divide_by_point(
        &self,
        a: &BinaryForm<F::Elem>,
        s_k: &F::Elem,
        t_k: &F::Elem,
    ) -> Option<BinaryForm<F::Elem>> {
        let f = &self.field;
        if a.degree == 0 {
            return self.form_is_zero(a).then(|| a.clone());
        }
        let n = a.degree;
        if f.is_zero(t_k) {
            // divisor is s_k * t; divisible iff the s^n coefficient vanishes
            if !f.is_zero(&a.coeffs[n]) {
                return None;
            }
            let inv = f.inv(s_k)?;
            return Some(BinaryForm {
                degree: n - 1,
                coeffs: a.coeffs[..n].iter().map(|c| f.mul(c, &inv)).collect(),
            });
        }
        let divisor = self.normalize(vec![s_k.clone(), f.neg(t_k)]);
        let (q, r) = self.divrem(&UniPoly(a.coeffs.clone()), &divisor);
        if !r.is_zero() {
            return None;
        }
        let mut coeffs = q.0;
        coeffs.resize(n, f.zero());
        Some(BinaryForm {
            degree: n - 1,
            coeffs,
        })
    }

    /// Order of vanishing of the form at `[s_k : t_k]`; `None` for the zero form.
    pub fn valuation_at(
        &self,
        a: &BinaryForm<F::Elem>,
        s_k: &F::Elem,
        t_k: &F::Elem,
    ) -> Option<u64> {
        if self.form_is_zero(a) {
            return None;
        }
        let mut v = 0;
        let mut cur = a.clone();
        while let Some(q) = self.divide_by_point(&cur, s_k, t_k) {
            v += 1;
            cur = q;
        }
        Some(v)
    }

    pub fn partial_s(&self, a: &BinaryForm<F::Elem>) -> BinaryForm<F::Elem> {
        let f = &self.field;
        if a.degree == 0 {
            return self.constant_form(f.zero());
        }
        BinaryForm {
            degree: a.degree - 1,
            coeffs: (1..=a.degree)
                .map(|i| f.mul(&f.from_i64(i as i64), &a.coeffs[i]))
                .collect(),
        }
    }

    pub fn partial_t(&self, a: &BinaryForm<F::Elem>) -> BinaryForm<F::Elem> {
        let f = &self.field;
        if a.degree == 0 {
            return self.constant_form(f.zero());
        }
        BinaryForm {
            degree: a.degree - 1,
            coeffs: (0..a.degree)
                .map(|i| f.mul(&f.from_i64((a.degree - i) as i64), &a.coeffs[i]))
                .collect(),
        }
    }

    /// Whether a family of forms has no common zero on the projective line.
    pub fn forms_coprime(&self, forms: &[BinaryForm<F::Elem>]) -> bool {
        if forms.iter().all(|g| self.infinity_multiplicity(g) > 0) {
            return false;
        }
        let g = forms.iter().fold(self.zero(), |acc, form| {
            self.gcd(&acc, &self.dehomogenize(form))
        });
        !g.is_zero() && self.is_constant(&g)
    }

    pub fn map_form<G: Field>(
        &self,
        a: &BinaryForm<G::Elem>,
        conv: impl Fn(&G::Elem) -> crate::Result<F::Elem>,
    ) -> crate::Result<BinaryForm<F::Elem>> {
        Ok(BinaryForm {
            degree: a.degree,
            coeffs: a.coeffs.iter().map(conv).collect::<crate::Result<_>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rational, PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(v: &[i64]) -> UniPoly<BigRational> {
        PolyRing::new(Rationals).normalize(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let r = PolyRing::new(Rationals);
        // (x-1)(x+2) and (x-1)^2
        let a = q(&[-2, 1, 1]);
        let b = q(&[1, -2, 1]);
        assert_eq!(r.gcd(&a, &b), q(&[-1, 1]));
        let (qq, rr) = r.divrem(&a, &b);
        assert_eq!(r.add(&r.mul(&qq, &b), &rr), a);
    }

    #[test]
    fn squarefree_over_q() {
        let r = PolyRing::new(Rationals);
        // (x-1)^3 (x+1)^2 (x^2+1)
        let p = r.mul(
            &r.mul(&r.pow(&q(&[-1, 1]), 3), &r.pow(&q(&[1, 1]), 2)),
            &q(&[1, 0, 1]),
        );
        let sq = r.squarefree_decomposition(&r.scale(&p, &rational(3, 7)));
        let shape: Vec<(Option<usize>, u64)> = sq.iter().map(|(g, i)| (g.degree(), *i)).collect();
        assert_eq!(shape, vec![(Some(2), 1), (Some(1), 2), (Some(1), 3)]);
    }

    #[test]
    fn squarefree_over_fp_with_pth_powers() {
        let f = PrimeField::new(3).unwrap();
        let r = PolyRing::new(f);
        // (x^3 + 1) = (x + 1)^3 in char 3, times (x + 2)
        let p = r.mul(&r.normalize(vec![1, 0, 0, 1]), &r.normalize(vec![2, 1]));
        let sq = r.squarefree_decomposition(&p);
        let shape: Vec<(Option<usize>, u64)> = sq.iter().map(|(g, i)| (g.degree(), *i)).collect();
        assert_eq!(shape, vec![(Some(1), 1), (Some(1), 3)]);
    }

    #[test]
    fn forms_valuation_and_infinity() {
        let r = PolyRing::new(Rationals);
        // (t*2 + s)^3 * t^2 : root at [2:-1]... the linear form vanishing at [s_k:t_k]=[2:-1] is 2t + s
        let l = r.linear_form(int(1), int(2));
        let f = r.form_mul(
            &r.form_pow(&l, 3),
            &r.form_pow(&r.linear_form(int(0), int(1)), 2),
        );
        assert_eq!(f.degree, 5);
        assert_eq!(r.valuation_at(&f, &int(2), &int(-1)), Some(3));
        assert_eq!(r.valuation_at(&f, &int(1), &int(0)), Some(2));
        assert_eq!(r.infinity_multiplicity(&f), 2);
        assert_eq!(r.valuation_at(&f, &int(5), &int(1)), Some(0));
        assert_eq!(r.form_eval(&f, &int(1), &int(1)), int(27));
    }

    #[test]
    fn euler_identity_for_partials() {
        // s * F_s + t * F_t = n * F
        let r = PolyRing::new(Rationals);
        let f = r.form(3, vec![int(1), int(-2), int(0), int(5)]);
        let lhs = r.form_combine(
            &int(1),
            &r.form_mul(&r.linear_form(int(1), int(0)), &r.partial_s(&f)),
            &int(1),
            &r.form_mul(&r.linear_form(int(0), int(1)), &r.partial_t(&f)),
        );
        assert_eq!(lhs, r.form_scale(&f, &int(3)));
    }

    #[test]
    fn coprimality() {
        let r = PolyRing::new(Rationals);
        let s = r.linear_form(int(1), int(0));
        let t = r.linear_form(int(0), int(1));
        assert!(r.forms_coprime(&[s.clone(), t.clone()]));
        assert!(!r.forms_coprime(&[t.clone(), r.form_mul(&t, &s)]));
        assert!(!r.forms_coprime(&[s.clone(), r.form_mul(&s, &t)]));
    }
}
