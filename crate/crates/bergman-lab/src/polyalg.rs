//! Sparse multivariate polynomials over complex coefficients.
//!
//! Terms live in a BTreeMap keyed by multi-index with graded-lexicographic
//! order, so iteration, serialization, and equality all see one canonical
//! form. Zero coefficients are never stored.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::ComplexPoint;

/// Exponent vector of a monomial z^alpha.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            exponents: vec![0; dim],
        }
    }

    /// The multi-index of the single variable z_k (0-based).
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut exponents = vec![0; dim];
        exponents[k] = 1;
        Self { exponents }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for MultiIndex {
    /// Graded-lexicographic: total degree first, then lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in canonical form: graded-lex term order, no stored
/// zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(dim), c);
        p
    }

    /// The coordinate polynomial z_k (0-based axis).
    pub fn variable(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidParameter(format!(
                "axis {k} out of range for dimension {dim}"
            )));
        }
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::unit(dim, k), Complex64::new(1.0, 0.0));
        Ok(p)
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree -1.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|a| a.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms
            .get(alpha)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(alpha);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum == Complex64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.dim, Complex64::new(1.0, 0.0));
        for _ in 0..e {
            out = out.mul(self).expect("same dimension");
        }
        out
    }

    /// Exact composition p(maps[0], ..., maps[n-1]).
    ///
    /// Powers of each component are memoized, keyed by (component, exponent).
    pub fn compose(&self, maps: &[Self]) -> Result<Self> {
        if maps.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: maps.len(),
            });
        }
        let target_dim = match maps.first() {
            Some(m) => m.dim,
            None => return Err(Error::InvalidParameter("empty map tuple".into())),
        };
        for m in maps {
            if m.dim != target_dim {
                return Err(Error::DimensionMismatch {
                    expected: target_dim,
                    got: m.dim,
                });
            }
        }

        // powers[k][e] = maps[k]^e, built incrementally up to the largest
        // exponent of z_k appearing in self.
        let mut powers: Vec<Vec<Self>> = maps
            .iter()
            .map(|m| vec![Self::constant(target_dim, Complex64::new(1.0, 0.0)), m.clone()])
            .collect();
        for alpha in self.terms.keys() {
            for (k, &e) in alpha.exponents().iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().unwrap().mul(&maps[k])?;
                    powers[k].push(next);
                }
            }
        }

        let mut out = Self::zero(target_dim);
        for (alpha, c) in &self.terms {
            let mut term = Self::constant(target_dim, *c);
            for (k, &e) in alpha.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[k][e as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Formal complex partial derivative along axis `k` (0-based).
    pub fn partial_derivative(&self, k: usize) -> Result<Self> {
        if k >= self.dim {
            return Err(Error::InvalidParameter(format!(
                "axis {k} out of range for dimension {}",
                self.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for (alpha, c) in &self.terms {
            let e = alpha.exponents()[k];
            if e == 0 {
                continue;
            }
            let mut exps = alpha.exponents().to_vec();
            exps[k] -= 1;
            out.add_term(MultiIndex::new(exps), c * e as f64);
        }
        Ok(out)
    }

    /// Evaluate at a point, with per-axis power caching.
    pub fn evaluate(&self, z: &ComplexPoint) -> Result<Complex64> {
        if z.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: z.dim(),
            });
        }
        let mut max_exp = vec![0u32; self.dim];
        for alpha in self.terms.keys() {
            for (m, &e) in max_exp.iter_mut().zip(alpha.exponents()) {
                *m = (*m).max(e);
            }
        }
        let powers: Vec<Vec<Complex64>> = z
            .coords()
            .iter()
            .zip(&max_exp)
            .map(|(c, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                v.push(Complex64::new(1.0, 0.0));
                for e in 1..=m as usize {
                    let next = v[e - 1] * c;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in &self.terms {
            let mut prod = *c;
            for (k, &e) in alpha.exponents().iter().enumerate() {
                prod *= powers[k][e as usize];
            }
            acc += prod;
        }
        Ok(acc)
    }

    /// Canonical text form: one `re,im:e1,...,en` line per term, graded-lex
    /// sorted. The zero polynomial serializes to the empty string.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (alpha, c) in &self.terms {
            let exps: Vec<String> = alpha.exponents().iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "{},{}:{}", c.re, c.im, exps.join(","));
        }
        out
    }

    /// Parse the text form; `dim` is required because the zero polynomial
    /// carries no lines. Accepts ';' as an alternative line separator.
    pub fn from_text(text: &str, dim: usize) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (lineno, raw) in text.split(['\n', ';']).enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::PolyParse {
                line: lineno + 1,
                msg,
            };
            let (coeff_part, exp_part) = line
                .split_once(':')
                .ok_or_else(|| err("expected 're,im:e1,...,en'".into()))?;
            let (re_s, im_s) = coeff_part
                .split_once(',')
                .ok_or_else(|| err("coefficient must be 're,im'".into()))?;
            let re: f64 = re_s
                .trim()
                .parse()
                .map_err(|e| err(format!("bad real part {re_s:?}: {e}")))?;
            let im: f64 = im_s
                .trim()
                .parse()
                .map_err(|e| err(format!("bad imaginary part {im_s:?}: {e}")))?;
            let exps: Vec<u32> = exp_part
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|e| err(format!("bad exponent {s:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            if exps.len() != dim {
                return Err(err(format!(
                    "expected {dim} exponents, got {}",
                    exps.len()
                )));
            }
            p.add_term(MultiIndex::new(exps), Complex64::new(re, im));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn z(k: usize) -> MultiPoly {
        MultiPoly::variable(2, k).unwrap()
    }

    fn pt(a: Complex64, b: Complex64) -> ComplexPoint {
        ComplexPoint::new(vec![a, b]).unwrap()
    }

    #[test]
    fn mul_and_binomial() {
        let z1z2 = z(0).mul(&z(1)).unwrap();
        assert_eq!(z1z2.num_terms(), 1);
        assert_eq!(z1z2.coefficient(&MultiIndex::new(vec![1, 1])), c(1.0));

        let sum = z(0).add(&z(1)).unwrap();
        let sq = sum.mul(&sum).unwrap();
        assert_eq!(sq.coefficient(&MultiIndex::new(vec![2, 0])), c(1.0));
        assert_eq!(sq.coefficient(&MultiIndex::new(vec![1, 1])), c(2.0));
        assert_eq!(sq.coefficient(&MultiIndex::new(vec![0, 2])), c(1.0));
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn cancellation_leaves_no_stored_zeros() {
        let p = z(0).add(&z(1)).unwrap().mul(&z(0)).unwrap();
        let diff = p.add(&p.scale(c(-1.0))).unwrap();
        assert!(diff.is_zero());
        assert_eq!(diff.num_terms(), 0);
        assert_eq!(diff.degree(), -1);
    }

    #[test]
    fn degree_is_additive_for_mul() {
        let p = z(0).pow(3).add(&MultiPoly::constant(2, c(1.0))).unwrap();
        let q = z(1).pow(2);
        assert_eq!(p.mul(&q).unwrap().degree(), 5);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p2 = MultiPoly::variable(2, 0).unwrap();
        let p3 = MultiPoly::variable(3, 0).unwrap();
        assert!(matches!(p2.add(&p3), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(p2.mul(&p3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        // z1^2 composed with (z1 + z2, z2) = (z1 + z2)^2.
        let p = z(0).pow(2);
        let res = p.compose(&[z(0).add(&z(1)).unwrap(), z(1)]).unwrap();
        assert_eq!(res.coefficient(&MultiIndex::new(vec![1, 1])), c(2.0));

        // Composition with the identity tuple is the identity.
        let q = z(0)
            .pow(2)
            .mul(&z(1))
            .unwrap()
            .add(&z(1).scale(c(3.0)))
            .unwrap();
        assert_eq!(q.compose(&[z(0), z(1)]).unwrap(), q);

        // z1 z2 composed with the projection (z1, 0) collapses to zero.
        let z1z2 = z(0).mul(&z(1)).unwrap();
        let res = z1z2.compose(&[z(0), MultiPoly::zero(2)]).unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn partial_derivative_examples() {
        let p = z(0).pow(2).mul(&z(1)).unwrap();
        let dp = p.partial_derivative(0).unwrap();
        assert_eq!(dp.coefficient(&MultiIndex::new(vec![1, 1])), c(2.0));
        assert!(z(0).pow(3).partial_derivative(1).unwrap().is_zero());
        assert!(z(0).partial_derivative(2).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let p = z(0).pow(2).add(&z(1)).unwrap();
        let v = p.evaluate(&pt(c(2.0), Complex64::new(0.0, 3.0))).unwrap();
        assert_eq!(v, Complex64::new(4.0, 3.0));
        assert_eq!(
            MultiPoly::zero(2).evaluate(&pt(c(1.0), c(1.0))).unwrap(),
            c(0.0)
        );
    }

    // Random integer-coefficient polynomials: double arithmetic is exact on
    // this range, so algebraic identities must hold bit-for-bit.
    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..=4, 0u32..=4), -5i32..=5), 0..8).prop_map(|terms| {
            let mut p = MultiPoly::zero(2);
            for ((e1, e2), co) in terms {
                if e1 + e2 <= 4 {
                    p.add_term(MultiIndex::new(vec![e1, e2]), c(co as f64));
                }
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_axioms_hold_exactly(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(p.add(&q).unwrap(), q.add(&p).unwrap());
            prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
            prop_assert_eq!(
                p.mul(&q).unwrap().mul(&r).unwrap(),
                p.mul(&q.mul(&r).unwrap()).unwrap()
            );
            prop_assert_eq!(
                p.mul(&q.add(&r).unwrap()).unwrap(),
                p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap()
            );
        }

        #[test]
        fn leibniz_rule_exact(p in arb_poly(), q in arb_poly()) {
            let lhs = p.mul(&q).unwrap().partial_derivative(0).unwrap();
            let rhs = p
                .partial_derivative(0)
                .unwrap()
                .mul(&q)
                .unwrap()
                .add(&p.mul(&q.partial_derivative(0).unwrap()).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mixed_partials_commute(p in arb_poly()) {
            prop_assert_eq!(
                p.partial_derivative(0).unwrap().partial_derivative(1).unwrap(),
                p.partial_derivative(1).unwrap().partial_derivative(0).unwrap()
            );
        }

        #[test]
        fn serialization_is_a_fixed_point(p in arb_poly()) {
            let text = p.to_text();
            let parsed = MultiPoly::from_text(&text, 2).unwrap();
            prop_assert_eq!(&parsed, &p);
            prop_assert_eq!(parsed.to_text(), text);
        }

        #[test]
        fn compose_associates_exactly(p in arb_poly()) {
            // F and G are small integer maps; all arithmetic stays exact.
            let f = [
                z(0).add(&z(1)).unwrap(),
                z(1).scale(c(2.0)),
            ];
            let g = [
                z(0).sub(&z(1)).unwrap(),
                z(0).mul(&z(1)).unwrap(),
            ];
            let lhs = p.compose(&f).unwrap().compose(&g).unwrap();
            let fg = [f[0].compose(&g).unwrap(), f[1].compose(&g).unwrap()];
            let rhs = p.compose(&fg).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compose_evaluate_commutation() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut rand_poly = |deg: u32| {
            let mut p = MultiPoly::zero(2);
            for e1 in 0..=deg {
                for e2 in 0..=(deg - e1) {
                    p.add_term(
                        MultiIndex::new(vec![e1, e2]),
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    );
                }
            }
            p
        };
        for _ in 0..20 {
            let p = rand_poly(3);
            let maps = [rand_poly(2), rand_poly(2)];
            let composed = p.compose(&maps).unwrap();
            let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(77);
            for _ in 0..5 {
                let zpt = pt(
                    Complex64::new(rng2.gen_range(-0.7..0.7), rng2.gen_range(-0.7..0.7)),
                    Complex64::new(rng2.gen_range(-0.7..0.7), rng2.gen_range(-0.7..0.7)),
                );
                let direct = composed.evaluate(&zpt).unwrap();
                let image = pt(
                    maps[0].evaluate(&zpt).unwrap(),
                    maps[1].evaluate(&zpt).unwrap(),
                );
                let via = p.evaluate(&image).unwrap();
                assert!(
                    (direct - via).norm() < 1e-12 * (1.0 + via.norm()),
                    "{direct} vs {via}"
                );
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "1,0:1,0\noops";
        match MultiPoly::from_text(bad, 2) {
            Err(Error::PolyParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(MultiPoly::from_text("1,0:1", 2).is_err());
    }
}
