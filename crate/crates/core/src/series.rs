//! Finitely supported Dirichlet series ("Dirichlet polynomials"): the
//! universal representation f(s) = sum a_n n^{-s} over a finite index set,
//! with evaluation, differentiation, Dirichlet convolution, truncated
//! exponentials, character twists and space norms.
//!
//! Coefficients are complex over the crate scalar; indices are u64. Exact
//! zeros are pruned on construction; numerical near-zeros are kept, since
//! they carry cancellation information.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::character::Character;
use crate::error::{Error, Result};
use crate::factor;
use crate::scalar::{from_index, index_pow_neg, ln_index, Real, C};
use crate::space::Space;

/// Cap on the number of semigroup elements enumerated by `exponentiate`.
const EXP_TERM_CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletPolynomial<T: Real> {
    coeffs: BTreeMap<u64, C<T>>,
}

impl<T: Real> Default for DirichletPolynomial<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> DirichletPolynomial<T> {
    pub fn zero() -> Self {
        DirichletPolynomial {
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series 1 (coefficient 1 at index 1).
    pub fn one() -> Self {
        Self::from_terms([(1u64, C::new(T::one(), T::zero()))])
    }

    /// Build from (index, coefficient) pairs; repeated indices accumulate,
    /// exact zeros are pruned. Panics on index 0.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, C<T>)>) -> Self {
        let mut coeffs: BTreeMap<u64, C<T>> = BTreeMap::new();
        for (n, a) in terms {
            assert!(n >= 1, "Dirichlet-series indices start at 1");
            match coeffs.entry(n) {
                Entry::Vacant(v) => {
                    v.insert(a);
                }
                Entry::Occupied(mut o) => {
                    *o.get_mut() += a;
                }
            }
        }
        coeffs.retain(|_, a| !(a.re.is_zero() && a.im.is_zero()));
        DirichletPolynomial { coeffs }
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real_terms(terms: impl IntoIterator<Item = (u64, T)>) -> Self {
        Self::from_terms(
            terms
                .into_iter()
                .map(|(n, x)| (n, C::new(x, T::zero()))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: u64) -> C<T> {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or_else(|| C::new(T::zero(), T::zero()))
    }

    /// Coefficient at index 1: the value at +infinity.
    pub fn constant_term(&self) -> C<T> {
        self.coeff(1)
    }

    /// Terms in ascending index order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, C<T>)> + '_ {
        self.coeffs.iter().map(|(&n, &a)| (n, a))
    }

    pub fn max_index(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(1)
    }

    /// Distinct primes dividing any index with nonzero coefficient.
    pub fn support_primes(&self) -> Vec<u64> {
        let mut set = BTreeSet::new();
        for &n in self.coeffs.keys() {
            for p in factor::prime_support(n) {
                set.insert(p);
            }
        }
        set.into_iter().collect()
    }

    /// Finite-sum evaluation at s, in ascending index order.
    pub fn eval(&self, s: C<T>) -> C<T> {
        let mut acc = C::new(T::zero(), T::zero());
        for (&n, &a) in &self.coeffs {
            acc += a * index_pow_neg(n, s);
        }
        acc
    }

    /// Term-wise derivative: coefficient at n becomes -a_n log n.
    pub fn derivative(&self) -> Self {
        Self::from_terms(self.coeffs.iter().filter_map(|(&n, &a)| {
            if n == 1 {
                None
            } else {
                Some((n, -a * ln_index::<T>(n)))
            }
        }))
    }

    /// Dirichlet convolution: coefficient of the product at n is
    /// sum over d | n of f_d g_{n/d}. Indices multiply; errors on overflow.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut acc: BTreeMap<u64, C<T>> = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            for (&m, &b) in &other.coeffs {
                let idx = n.checked_mul(m).ok_or(Error::IndexOverflow)?;
                let c = a * b;
                match acc.entry(idx) {
                    Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                    }
                }
            }
        }
        Ok(Self::from_terms(acc))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().chain(other.terms()))
    }

    pub fn scale(&self, c: C<T>) -> Self {
        Self::from_terms(self.terms().map(|(n, a)| (n, a * c)))
    }

    /// Multiply every index by a fixed factor (rewrites f(s) as a series in
    /// (k n)^{-s}; the coefficient values are unchanged).
    pub fn shift_indices(&self, k: u64) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            let idx = n.checked_mul(k).ok_or(Error::IndexOverflow)?;
            coeffs.insert(idx, a);
        }
        Ok(DirichletPolynomial { coeffs })
    }

    /// Truncated exponential: the coefficients of exp(f) on indices <= bound.
    ///
    /// b_1 = e^{a_1} and, for m > 1,
    ///   b_m log m = sum over divisors d of m with d > 1 of (a_d log d) b_{m/d},
    /// the Dirichlet-coefficient form of g' = f' g. Only the multiplicative
    /// semigroup generated by the support of f is materialized, so the bound
    /// may exceed the dense range by many orders of magnitude.
    pub fn exponentiate(&self, bound: u64) -> Result<Self> {
        if bound < 1 {
            return Err(Error::InvalidParameter(
                "exponentiate bound must be at least 1".into(),
            ));
        }
        let gens: Vec<(u64, C<T>)> = self
            .coeffs
            .iter()
            .filter(|&(&n, _)| n > 1)
            .map(|(&n, &a)| (n, a))
            .collect();
        let semigroup = multiplicative_semigroup(
            &gens.iter().map(|&(n, _)| n).collect::<Vec<_>>(),
            bound,
            EXP_TERM_CAP,
        )?;
        let mut out: BTreeMap<u64, C<T>> = BTreeMap::new();
        let a1 = self.constant_term();
        out.insert(1, a1.exp());
        for &m in semigroup.iter().skip(1) {
            let mut acc = C::new(T::zero(), T::zero());
            for &(d, a_d) in &gens {
                if m % d == 0 {
                    if let Some(&b) = out.get(&(m / d)) {
                        acc += a_d * ln_index::<T>(d) * b;
                    }
                }
            }
            out.insert(m, acc / ln_index::<T>(m));
        }
        Ok(Self::from_terms(out))
    }

    /// Coefficient-wise twist by a character: a_n -> a_n chi(n).
    ///
    /// Primes in the support of f that the character does not cover act as
    /// z_p = 1; a notice is logged because the polytorus semantics are total.
    pub fn twist(&self, chi: &Character<T>) -> Self {
        let missing: Vec<u64> = self
            .support_primes()
            .into_iter()
            .filter(|&p| !chi.covers(p))
            .collect();
        if !missing.is_empty() && !chi.is_trivial() {
            log::info!(
                "twist: character does not cover primes {missing:?}; treating them as z_p = 1"
            );
        }
        Self::from_terms(self.terms().map(|(n, a)| (n, a * chi.eval(n))))
    }

    /// Squared norm in the given space: Hardy sums |a_n|^2, Bergman weights
    /// each term by (1 + log n)^{-(1+alpha)}.
    pub fn norm_squared(&self, space: Space<T>) -> T {
        let mut acc = T::zero();
        for (&n, &a) in &self.coeffs {
            acc = acc + a.norm_sqr() * space.basis_norm_sq(n);
        }
        acc
    }

    /// Largest |a_n| log n sum: a Lipschitz bound for t -> f(sigma + i t).
    pub fn derivative_l1_bound(&self) -> T {
        let mut acc = T::zero();
        for (&n, &a) in &self.coeffs {
            if n > 1 {
                acc = acc + a.norm() * ln_index::<T>(n);
            }
        }
        acc
    }

    /// Sum of |a_n| n^{-sigma} over n >= 2: bounds |f(s) - a_1| on Re s >= sigma.
    pub fn tail_bound(&self, sigma: T) -> T {
        let mut acc = T::zero();
        for (&n, &a) in &self.coeffs {
            if n > 1 {
                acc = acc + a.norm() * from_index::<T>(n).powf(-sigma);
            }
        }
        acc
    }
}

/// Sorted enumeration of the multiplicative semigroup generated by `gens`
/// (including 1), truncated at `bound`.
pub(crate) fn multiplicative_semigroup(
    gens: &[u64],
    bound: u64,
    cap: usize,
) -> Result<Vec<u64>> {
    let mut heap: BinaryHeap<std::cmp::Reverse<u64>> = BinaryHeap::new();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    heap.push(std::cmp::Reverse(1));
    seen.insert(1);
    while let Some(std::cmp::Reverse(m)) = heap.pop() {
        out.push(m);
        if out.len() > cap {
            return Err(Error::ExpansionTooLarge);
        }
        for &g in gens {
            if let Some(next) = m.checked_mul(g) {
                if next <= bound && seen.insert(next) {
                    heap.push(std::cmp::Reverse(next));
                }
            }
        }
    }
    Ok(out)
}

// --- serialization: JSON object mapping decimal index strings to [re, im] ---

impl<T: Real + Serialize> Serialize for DirichletPolynomial<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, [T; 2]> = self
            .coeffs
            .iter()
            .map(|(&n, &a)| (n.to_string(), [a.re, a.im]))
            .collect();
        map.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DirichletPolynomial<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map: BTreeMap<String, [T; 2]> = BTreeMap::deserialize(deserializer)?;
        let mut coeffs = BTreeMap::new();
        for (key, [re, im]) in map {
            let n: u64 = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad series index {key:?}")))?;
            if n == 0 {
                return Err(D::Error::custom("series indices start at 1"));
            }
            coeffs.insert(n, C::new(re, im));
        }
        Ok(Self::from_terms(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let f = DirichletPolynomial::from_real_terms([(3u64, 1.0)]);
        assert_eq!(f.eval(c(0.0, 0.0)), c(1.0, 0.0));

        let f = DirichletPolynomial::from_real_terms([(1u64, 1.0), (2, 2.0)]);
        assert!((f.eval(c(1.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);

        let f = DirichletPolynomial::from_real_terms([(2u64, 1.0), (6, -1.0)]);
        let expect = 0.25 - 1.0 / 36.0;
        assert!((f.eval(c(2.0, 0.0)) - c(expect, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let f = DirichletPolynomial::from_real_terms([(2u64, 1.0)]);
        let d = f.derivative();
        assert!((d.coeff(2) - c(-(2.0f64.ln()), 0.0)).norm() < 1e-16);

        let constant = DirichletPolynomial::from_real_terms([(1u64, 5.0)]);
        assert!(constant.derivative().is_zero());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        // central difference oracle at random-ish points, indices <= 50
        let f = DirichletPolynomial::from_terms([
            (1u64, c(0.3, -0.2)),
            (2, c(1.0, 0.5)),
            (15, c(-0.7, 0.1)),
            (50, c(0.2, 0.9)),
        ]);
        let d = f.derivative();
        let h = 1e-5;
        for &s in &[c(0.4, 1.3), c(2.0, -0.7), c(-0.5, 0.2)] {
            let fd = (f.eval(s + c(h, 0.0)) - f.eval(s - c(h, 0.0))) / c(2.0 * h, 0.0);
            assert!(
                (d.eval(s) - fd).norm() < 1e-8,
                "finite-difference mismatch at {s}"
            );
        }
    }

    #[test]
    fn multiply_examples() {
        let two = DirichletPolynomial::from_real_terms([(2u64, 1.0)]);
        let three = DirichletPolynomial::from_real_terms([(3u64, 1.0)]);
        let prod = two.multiply(&three).unwrap();
        assert_eq!(prod, DirichletPolynomial::from_real_terms([(6u64, 1.0)]));

        let f = DirichletPolynomial::from_terms([(2u64, c(0.5, 1.0)), (9, c(-1.0, 0.0))]);
        assert_eq!(f.multiply(&DirichletPolynomial::one()).unwrap(), f);
    }

    #[test]
    fn multiply_pointwise_oracle() {
        let f = DirichletPolynomial::from_terms([(1u64, c(1.0, 0.2)), (2, c(-0.4, 0.8)), (6, c(0.3, 0.0))]);
        let g = DirichletPolynomial::from_terms([(3u64, c(0.9, -0.1)), (4, c(0.0, 1.1))]);
        let prod = f.multiply(&g).unwrap();
        for &s in &[c(1.5, 0.4), c(3.0, -2.0), c(0.2, 7.0)] {
            let lhs = prod.eval(s);
            let rhs = f.eval(s) * g.eval(s);
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn exponentiate_zero_is_one() {
        let zero = DirichletPolynomial::<f64>::zero();
        assert_eq!(zero.exponentiate(10).unwrap(), DirichletPolynomial::one());
    }

    #[test]
    fn exponentiate_single_prime_power_series() {
        // f = a 2^{-s}: coefficients of exp at 2^k are a^k / k!
        let a = c(0.8, -0.3);
        let f = DirichletPolynomial::from_terms([(2u64, a)]);
        let e = f.exponentiate(1 << 10).unwrap();
        let mut expect = c(1.0, 0.0);
        for k in 0..=10u32 {
            let idx = 1u64 << k;
            assert!(
                (e.coeff(idx) - expect).norm() < 1e-14,
                "coefficient at 2^{k}"
            );
            expect = expect * a / c((k + 1) as f64, 0.0);
        }
        assert_eq!(e.max_index(), 1 << 10);
    }

    #[test]
    fn exponentiate_matches_taylor_oracle() {
        // truncated Taylor sum via repeated multiply, indices <= 36
        let f = DirichletPolynomial::from_terms([
            (1u64, c(0.2, 0.1)),
            (2, c(0.6, -0.4)),
            (3, c(-0.5, 0.3)),
        ]);
        let bound = 36;
        let e = f.exponentiate(bound).unwrap();

        let mut taylor = DirichletPolynomial::one();
        let mut term = DirichletPolynomial::one();
        for k in 1..=30 {
            term = term.multiply(&f).unwrap();
            term = DirichletPolynomial::from_terms(
                term.terms().filter(|&(n, _)| n <= bound),
            );
            taylor = taylor.add(&term.scale(c(1.0 / factorial(k), 0.0)));
        }
        for (n, a) in e.terms() {
            assert!(
                (a - taylor.coeff(n)).norm() < 1e-12,
                "exp coefficient mismatch at {n}"
            );
        }
    }

    fn factorial(k: u32) -> f64 {
        (1..=k).map(|i| i as f64).product::<f64>().max(1.0)
    }

    #[test]
    fn exponentiate_rejects_bad_bound() {
        let f = DirichletPolynomial::<f64>::one();
        assert!(f.exponentiate(0).is_err());
    }

    #[test]
    fn twist_examples() {
        let f = DirichletPolynomial::from_terms([(2u64, c(1.0, 0.0)), (6, c(0.5, 0.5))]);
        assert_eq!(f.twist(&Character::trivial()), f);

        let chi = Character::from_angles([(2u64, std::f64::consts::FRAC_PI_2)]).unwrap();
        let g = DirichletPolynomial::from_real_terms([(2u64, 1.0)]).twist(&chi);
        assert!((g.coeff(2) - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn twist_is_vertical_translation() {
        let f = DirichletPolynomial::from_terms([
            (2u64, c(1.0, -0.5)),
            (3, c(0.2, 0.2)),
            (12, c(-0.9, 0.1)),
        ]);
        let tau = 0.83;
        let chi = Character::vertical_translate(&f.support_primes(), tau);
        let twisted = f.twist(&chi);
        for &s in &[c(0.7, 0.0), c(1.2, -2.5), c(2.0, 4.0)] {
            let lhs = twisted.eval(s);
            let rhs = f.eval(s + c(0.0, tau));
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn twist_involution_via_conjugate() {
        let f = DirichletPolynomial::from_terms([(2u64, c(0.3, 1.0)), (9, c(-0.2, 0.4))]);
        let chi = Character::from_angles([(2u64, 1.1), (3, -0.6)]).unwrap();
        let back = f.twist(&chi).twist(&chi.conj());
        for (n, a) in f.terms() {
            assert!((a - back.coeff(n)).norm() < 1e-14);
        }
    }

    #[test]
    fn norms() {
        let f = DirichletPolynomial::from_real_terms([(2u64, 3.0f64)]);
        assert!((f.norm_squared(Space::Hardy) - 9.0).abs() < 1e-15);

        let one = DirichletPolynomial::from_real_terms([(1u64, 1.0f64)]);
        assert!((one.norm_squared(Space::bergman(0.0).unwrap()) - 1.0).abs() < 1e-15);

        let f = DirichletPolynomial::from_real_terms([(2u64, 1.0)]);
        let expect = 1.0 / (1.0 + 2.0f64.ln()).powi(2);
        assert!((f.norm_squared(Space::bergman(1.0).unwrap()) - expect).abs() < 1e-15);
    }

    #[test]
    fn prunes_exact_zeros_only() {
        let f = DirichletPolynomial::from_terms([
            (2u64, c(0.0, 0.0)),
            (3, c(1e-300, 0.0)),
        ]);
        assert_eq!(f.len(), 1);
        assert!(f.coeff(3).re > 0.0);
    }

    #[test]
    fn json_round_trip() {
        let f = DirichletPolynomial::from_terms([(2u64, c(-1.0, 0.5)), (10, c(0.0, 2.0))]);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"2\""));
        let back: DirichletPolynomial<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn generic_over_f32() {
        let f = DirichletPolynomial::<f32>::from_real_terms([(2u64, 1.0)]);
        let v = f.eval(C::new(1.0f32, 0.0));
        assert!((v.re - 0.5).abs() < 1e-6);
        let _ = real::<f32>(0.25);
    }
}
