//! Truncated q-expansion arithmetic.
//!
//! A [`PowerSeries`] holds the coefficients of `q^0 .. q^(order-1)`; every
//! operation truncates to the shorter operand. The coefficient type is
//! generic over the ring: production code uses `BigInt` (see the `ZSeries`
//! alias at the crate root), tests freely use machine integers.
//!
//! Multiplication has two paths, a zero-skipping schoolbook loop and a
//! Karatsuba recursion, selected by an internal heuristic. Both paths add
//! the same exact integers, so their results are bit-identical; the test
//! suite pins that down.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficient ring bound. Blanket-implemented for every type with exact
/// ring ops by value and by reference (`BigInt`, `i64`, `i128`, ...).
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::AddAssign
    + std::ops::SubAssign
    + Send
    + Sync
    + 'static
{
    fn ref_mul(a: &Self, b: &Self) -> Self;
    fn ref_add(a: &Self, b: &Self) -> Self;
    fn ref_sub(a: &Self, b: &Self) -> Self;
}

impl<T> Coeff for T
where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + std::ops::Neg<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::AddAssign
        + std::ops::SubAssign
        + Send
        + Sync
        + 'static,
    for<'a> &'a T: Mul<&'a T, Output = T>
        + std::ops::Add<&'a T, Output = T>
        + std::ops::Sub<&'a T, Output = T>,
{
    fn ref_mul(a: &Self, b: &Self) -> Self {
        a * b
    }
    fn ref_add(a: &Self, b: &Self) -> Self {
        a + b
    }
    fn ref_sub(a: &Self, b: &Self) -> Self {
        a - b
    }
}

/// Below this output order the Karatsuba recursion bottoms out.
const KARATSUBA_THRESHOLD: usize = 32;
/// Minimum half-size before a Karatsuba level is allowed to fork.
const PARALLEL_MIN: usize = 2048;

/// A q-expansion truncated to a fixed order: `coeffs[n]` is the coefficient
/// of `q^n`, `0 <= n < order`, and `order == coeffs.len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> PowerSeries<C> {
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs order >= 1");
        PowerSeries { coeffs }
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1);
        PowerSeries {
            coeffs: vec![C::zero(); order],
        }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = C::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Copy truncated (or zero-extended) to the given order.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order >= 1);
        let mut coeffs: Vec<C> = self.coeffs.iter().take(order).cloned().collect();
        coeffs.resize(order, C::zero());
        PowerSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..n)
            .map(|i| C::ref_add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        PowerSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..n)
            .map(|i| C::ref_sub(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        PowerSeries { coeffs }
    }

    /// Cauchy product truncated to `min(order, other.order)`.
    ///
    /// Dispatches between the schoolbook and Karatsuba paths; the two are
    /// bit-identical, so the cutover is purely a speed tunable.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: mul_dispatch(&self.coeffs[..n], &other.coeffs[..n], n),
        }
    }

    /// Quadratic-time reference path (skips zero terms of the sparser side).
    pub fn multiply_schoolbook(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: schoolbook_trunc(&self.coeffs[..n], &other.coeffs[..n], n),
        }
    }

    /// Karatsuba path, unconditionally.
    pub fn multiply_fast(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut full = karatsuba(&self.coeffs[..n], &other.coeffs[..n]);
        full.truncate(n);
        full.resize(n, C::zero());
        PowerSeries { coeffs: full }
    }

    /// Binary exponentiation over `multiply`; `pow(a, 0)` is the constant 1.
    ///
    /// Recursive halving (square `pow(e/2)`, multiply once more on odd e)
    /// rather than the LSB-first loop: intermediate powers of sparse series
    /// are often sparse themselves, and this shape lets the multiply
    /// dispatch see them.
    pub fn pow(&self, e: u64) -> Self {
        match e {
            0 => Self::one(self.order()),
            1 => self.clone(),
            _ if e % 2 == 0 => {
                let h = self.pow(e / 2);
                h.multiply(&h)
            }
            _ => {
                let h = self.pow(e - 1);
                h.multiply(self)
            }
        }
    }

    /// Multiplicative inverse mod `q^order` by Newton doubling.
    /// Only constant term +1 or -1 keeps the coefficients in the ring.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        let minus_one = -C::one();
        if *c0 != C::one() && *c0 != minus_one {
            return Err(Error::NonInvertibleSeries);
        }
        let n = self.order();
        let mut g = vec![c0.clone()]; // (±1)^{-1} = ±1
        let mut prec = 1usize;
        let two = C::ref_add(&C::one(), &C::one());
        while prec < n {
            let new_prec = (2 * prec).min(n);
            // g <- g * (2 - f g)  mod q^new_prec
            let fg = mul_dispatch(&self.coeffs[..new_prec], &g, new_prec);
            let mut correction = vec![C::zero(); new_prec];
            correction[0] = C::ref_sub(&two, &fg[0]);
            for i in 1..new_prec {
                correction[i] = -fg[i].clone();
            }
            g = mul_dispatch(&g, &correction, new_prec);
            prec = new_prec;
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// Multiply by q^k, dropping coefficients that leave the window.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![C::zero(); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].clone();
        }
        PowerSeries { coeffs }
    }
}

impl<C: Coeff + fmt::Display> fmt::Debug for PowerSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut shown = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if shown > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})q^{i}")?;
            shown += 1;
            if shown == 12 {
                write!(f, " + ...")?;
                break;
            }
        }
        if shown == 0 {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

fn mul_dispatch<C: Coeff>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let nnz_a = a.iter().filter(|c| !c.is_zero()).count();
    let nnz_b = b.iter().filter(|c| !c.is_zero()).count();
    let sparse = nnz_a.min(nnz_b);
    // Schoolbook wins for small orders and for sparse operands such as the
    // Euler product (O(sqrt n) support).
    let sqrt_n = (n as f64).sqrt() as usize;
    if n <= 2 * KARATSUBA_THRESHOLD || sparse <= 2 * sqrt_n {
        schoolbook_trunc(a, b, n)
    } else {
        let mut full = karatsuba(a, b);
        full.truncate(n);
        full.resize(n, C::zero());
        full
    }
}

fn schoolbook_trunc<C: Coeff>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::zero(); n];
    // Outer loop over the sparser operand.
    let (outer, inner) = {
        let nnz_a = a.iter().filter(|c| !c.is_zero()).count();
        let nnz_b = b.iter().filter(|c| !c.is_zero()).count();
        if nnz_a <= nnz_b {
            (a, b)
        } else {
            (b, a)
        }
    };
    for (i, ci) in outer.iter().enumerate().take(n) {
        if ci.is_zero() {
            continue;
        }
        for (j, cj) in inner.iter().enumerate().take(n - i) {
            if cj.is_zero() {
                continue;
            }
            out[i + j] += C::ref_mul(ci, cj);
        }
    }
    out
}

/// Full product (length `a.len() + b.len() - 1`) by schoolbook; the
/// Karatsuba base case.
fn schoolbook_full<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, ci) in a.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (j, cj) in b.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            out[i + j] += C::ref_mul(ci, cj);
        }
    }
    out
}

fn vec_add<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Vec<C> = long.to_vec();
    for (o, s) in out.iter_mut().zip(short.iter()) {
        *o += s.clone();
    }
    out
}

/// Full product by Karatsuba splitting, forking the two independent halves
/// when they are large enough. Integer addition is associative, so the
/// result does not depend on the split or the thread schedule.
fn karatsuba<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let (la, lb) = (a.len(), b.len());
    if la.min(lb) <= KARATSUBA_THRESHOLD {
        return schoolbook_full(a, b);
    }
    let mid = la.min(lb) / 2;
    let (a0, a1) = a.split_at(mid);
    let (b0, b1) = b.split_at(mid);

    let (z0, z2) = if mid >= PARALLEL_MIN {
        rayon::join(|| karatsuba(a0, b0), || karatsuba(a1, b1))
    } else {
        (karatsuba(a0, b0), karatsuba(a1, b1))
    };
    let asum = vec_add(a0, a1);
    let bsum = vec_add(b0, b1);
    let mut z1 = karatsuba(&asum, &bsum);
    for (i, v) in z0.iter().enumerate() {
        z1[i] -= v.clone();
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] -= v.clone();
    }

    let mut out = vec![C::zero(); la + lb - 1];
    for (i, v) in z0.into_iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in z1.into_iter().enumerate() {
        out[mid + i] += v;
    }
    for (i, v) in z2.into_iter().enumerate() {
        out[2 * mid + i] += v;
    }
    out
}

/// Euler's product `prod_{n>=1} (1 - q^n)` truncated to `order`, via the
/// pentagonal-number expansion: the coefficient of `q^{k(3k-1)/2}` is
/// `(-1)^k` for every integer k, all other coefficients vanish.
pub fn euler_series<C: Coeff>(order: usize) -> PowerSeries<C> {
    euler_series_scaled(1, order)
}

/// `prod_{n>=1} (1 - q^{d n})`, i.e. the Euler product with q replaced by q^d.
pub fn euler_series_scaled<C: Coeff>(d: u64, order: usize) -> PowerSeries<C> {
    assert!(order >= 1 && d >= 1);
    let mut coeffs = vec![C::zero(); order];
    coeffs[0] = C::one();
    let mut k = 1u64;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        let sign_neg = k % 2 == 1;
        let mut placed = false;
        for g in [g1, g2] {
            if let Some(idx) = g.checked_mul(d).filter(|&m| m < order as u64) {
                coeffs[idx as usize] = if sign_neg { -C::one() } else { C::one() };
                placed = true;
            }
        }
        if !placed {
            break;
        }
        k += 1;
    }
    PowerSeries { coeffs }
}

/// A product of rescaled Dedekind eta factors `prod_d eta(d z)^{r_d}`,
/// stored without the eta prefactors: expanding multiplies the Euler
/// products and shifts by `q^{sum d r / 24}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    factors: Vec<(u64, i64)>,
    leading_exponent: u64,
}

impl EtaQuotient {
    /// `factors` are (scale d, exponent r) pairs; repeated scales merge.
    /// Rejected unless `sum d r` is a nonnegative multiple of 24.
    pub fn new(factors: &[(u64, i64)]) -> Result<Self> {
        let mut merged: Vec<(u64, i64)> = Vec::new();
        for &(d, r) in factors {
            if d == 0 {
                return Err(Error::InvalidParameter("eta scale must be >= 1".into()));
            }
            match merged.iter_mut().find(|(d0, _)| *d0 == d) {
                Some((_, r0)) => *r0 += r,
                None => merged.push((d, r)),
            }
        }
        merged.retain(|&(_, r)| r != 0);
        merged.sort_by_key(|&(d, _)| d);
        let num: i64 = merged.iter().map(|&(d, r)| d as i64 * r).sum();
        if num < 0 || num % 24 != 0 {
            return Err(Error::FractionalEtaExponent { num });
        }
        Ok(EtaQuotient {
            factors: merged,
            leading_exponent: (num / 24) as u64,
        })
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// The power of q in front of the Euler products: `sum d r / 24`.
    pub fn leading_exponent(&self) -> u64 {
        self.leading_exponent
    }

    /// Twice the weight, `sum r`.
    pub fn weight_times_two(&self) -> i64 {
        self.factors.iter().map(|&(_, r)| r).sum()
    }

    /// Expand to a power series of the given order. Negative exponents go
    /// through series inversion (the Euler product has constant term 1).
    pub fn expand<C: Coeff>(&self, order: usize) -> Result<PowerSeries<C>> {
        assert!(order >= 1);
        let shift = self.leading_exponent;
        if shift >= order as u64 {
            return Ok(PowerSeries::zero(order));
        }
        let inner_order = order - shift as usize;
        let mut acc = PowerSeries::<C>::one(inner_order);
        for &(d, r) in &self.factors {
            let base = euler_series_scaled::<C>(d, inner_order);
            let factor = if r >= 0 {
                base.pow(r as u64)
            } else {
                base.invert()?.pow((-r) as u64)
            };
            acc = acc.multiply(&factor);
        }
        let mut coeffs = vec![C::zero(); order];
        for (i, c) in acc.into_coeffs().into_iter().enumerate() {
            coeffs[i + shift as usize] = c;
        }
        Ok(PowerSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type S = PowerSeries<i64>;

    fn series(v: &[i64]) -> S {
        PowerSeries::from_coeffs(v.to_vec())
    }

    /// Oracle: multiply out `prod_{n=1..order-1} (1 - q^n)` factor by factor.
    fn euler_oracle(order: usize) -> Vec<i64> {
        let mut p = vec![0i64; order];
        p[0] = 1;
        for n in 1..order {
            // multiply by (1 - q^n) in place, descending
            for i in (0..order.saturating_sub(n)).rev() {
                let t = p[i];
                p[i + n] -= t;
            }
        }
        p
    }

    #[test]
    fn euler_series_small_orders() {
        assert_eq!(euler_series::<i64>(1).coeffs(), &[1]);
        assert_eq!(euler_series::<i64>(8).coeffs(), &[1, -1, -1, 0, 0, 1, 0, 1]);
        let e13 = euler_series::<i64>(13);
        assert_eq!(*e13.coeff(12), -1);
        assert_eq!(e13.coeffs(), &euler_oracle(13)[..]);
    }

    #[test]
    fn euler_series_matches_direct_product() {
        for order in [2usize, 5, 17, 100, 600] {
            assert_eq!(euler_series::<i64>(order).coeffs(), &euler_oracle(order)[..]);
        }
    }

    #[test]
    fn euler_series_pentagonal_support() {
        let order = 1000;
        let e = euler_series::<i64>(order);
        let mut expected = vec![0i64; order];
        // k = 0, ±1, ±2, ... ; exponent k(3k-1)/2
        for k in -30i64..=30 {
            let g = k * (3 * k - 1) / 2;
            if (0..order as i64).contains(&g) {
                expected[g as usize] = if k % 2 == 0 { 1 } else { -1 };
            }
        }
        assert_eq!(e.coeffs(), &expected[..]);
    }

    #[test]
    fn multiply_binomials() {
        let a = series(&[1, 1, 0]);
        let b = series(&[1, -1, 0]);
        assert_eq!(a.multiply(&b).coeffs(), &[1, 0, -1]);
    }

    #[test]
    fn multiply_truncates_to_shorter_operand() {
        let a = series(&[1, 2, 3, 4, 5]);
        let b = series(&[1, 1]);
        assert_eq!(a.multiply(&b).coeffs(), &[1, 3]);
    }

    #[test]
    fn euler_square_matches_squared_oracle() {
        let order = 50;
        let e = euler_series::<i64>(order);
        let oracle = euler_oracle(order);
        let mut sq = vec![0i64; order];
        for i in 0..order {
            for j in 0..order - i {
                sq[i + j] += oracle[i] * oracle[j];
            }
        }
        assert_eq!(e.multiply(&e).coeffs(), &sq[..]);
    }

    #[test]
    fn pow_small_laws() {
        let e = euler_series::<i64>(40);
        assert_eq!(e.pow(1), e);
        let p2 = e.pow(2);
        assert_eq!(e.pow(4), p2.multiply(&p2));
    }

    #[test]
    fn pow_euler_24_is_delta_tail() {
        // q * Euler^24 = Delta; its first coefficients are the tau values.
        let e = euler_series::<BigInt>(10);
        let d = e.pow(24).shift_up(1);
        let tau: Vec<i64> = vec![0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643];
        let got: Vec<BigInt> = tau.iter().map(|&t| BigInt::from(t)).collect();
        assert_eq!(d.coeffs(), &got[..]);
    }

    #[test]
    fn invert_euler_roundtrip() {
        let e = euler_series::<BigInt>(300);
        let inv = e.invert().unwrap();
        assert_eq!(e.multiply(&inv), PowerSeries::one(300));
        // The inverse of the Euler product is the partition generating series.
        assert_eq!(inv.coeffs()[..10].to_vec(), [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
            .map(BigInt::from).to_vec());
    }

    #[test]
    fn invert_rejects_non_unit_constant() {
        assert!(series(&[2, 1]).invert().is_err());
        assert!(series(&[0, 1]).invert().is_err());
        let neg = series(&[-1, 3, 5]);
        let inv = neg.invert().unwrap();
        assert_eq!(neg.multiply(&inv), PowerSeries::one(3));
    }

    #[test]
    fn fast_equals_schoolbook_on_big_random_series() {
        // Deterministic pseudo-random BigInt coefficients, ~100 bits.
        fn mix(mut z: u64) -> u64 {
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        }
        let gen = |seed: u64, order: usize| -> PowerSeries<BigInt> {
            let coeffs = (0..order)
                .map(|i| {
                    let hi = mix(seed ^ (2 * i as u64));
                    let lo = mix(seed ^ (2 * i as u64 + 1));
                    let v = (BigInt::from(hi) << 64u32) + BigInt::from(lo);
                    if hi % 3 == 0 {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            PowerSeries::from_coeffs(coeffs)
        };
        for (seed, order) in [(1u64, 257usize), (2, 1024), (3, 4096)] {
            let a = gen(seed, order);
            let b = gen(seed.wrapping_add(99), order);
            assert_eq!(a.multiply_fast(&b), a.multiply_schoolbook(&b), "order {order}");
        }
    }

    #[test]
    fn eta_quotient_validation() {
        assert!(EtaQuotient::new(&[(1, 24)]).is_ok());
        assert!(EtaQuotient::new(&[(1, 2), (11, 2)]).is_ok());
        // sum d r = 1, fractional
        assert!(matches!(
            EtaQuotient::new(&[(1, 1)]),
            Err(Error::FractionalEtaExponent { num: 1 })
        ));
        // negative multiple of 24
        assert!(EtaQuotient::new(&[(1, -24)]).is_err());
        assert!(EtaQuotient::new(&[(0, 24)]).is_err());
    }

    #[test]
    fn eta_expand_delta() {
        let eta24 = EtaQuotient::new(&[(1, 24)]).unwrap();
        assert_eq!(eta24.leading_exponent(), 1);
        assert_eq!(eta24.weight_times_two(), 24);
        let d = eta24.expand::<BigInt>(10).unwrap();
        let tau = [0i64, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643];
        for (n, &t) in tau.iter().enumerate() {
            assert_eq!(*d.coeff(n), BigInt::from(t), "n = {n}");
        }
    }

    #[test]
    fn eta_expand_empty_is_one() {
        let empty = EtaQuotient::new(&[]).unwrap();
        assert_eq!(empty.expand::<i64>(5).unwrap(), PowerSeries::one(5));
    }

    #[test]
    fn eta_expand_scaled_support_parity() {
        // eta(2z)^24 = q^2 prod (1-q^{2n})^24: support only on even exponents.
        let eq = EtaQuotient::new(&[(2, 24)]).unwrap();
        assert_eq!(eq.leading_exponent(), 2);
        let s = eq.expand::<BigInt>(40).unwrap();
        for (n, c) in s.coeffs().iter().enumerate() {
            if n % 2 == 1 {
                assert!(c.is_zero(), "odd index {n} should vanish");
            }
        }
        assert_eq!(*s.coeff(2), BigInt::from(1));
        assert_eq!(*s.coeff(4), BigInt::from(-24));
    }

    #[test]
    fn eta_expand_negative_exponent() {
        // eta(1)^-24 * eta(1)^48 == eta(1)^24
        let mixed = EtaQuotient::new(&[(1, -24), (1, 48)]).unwrap();
        let plain = EtaQuotient::new(&[(1, 24)]).unwrap();
        assert_eq!(
            mixed.expand::<BigInt>(50).unwrap(),
            plain.expand::<BigInt>(50).unwrap()
        );
        // and a genuinely negative one: eta(4z)^8 / eta(z)^8 has
        // sum d r = 24, so the prefactor is q^1.
        let eq = EtaQuotient::new(&[(4, 8), (1, -8)]).unwrap();
        assert_eq!(eq.leading_exponent(), 1);
        let order = 40;
        let s = eq.expand::<BigInt>(order).unwrap();
        let manual = euler_series_scaled::<BigInt>(4, order - 1)
            .pow(8)
            .multiply(&euler_series::<BigInt>(order - 1).invert().unwrap().pow(8))
            .shift_up(0);
        for n in 0..order - 1 {
            assert_eq!(s.coeff(n + 1), manual.coeff(n), "n = {n}");
        }
        assert!(s.coeff(0).is_zero());
    }

    fn small_series() -> impl Strategy<Value = S> {
        prop::collection::vec(-100i64..=100, 1..=64).prop_map(PowerSeries::from_coeffs)
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_series(), b in small_series(), c in small_series()) {
            let ab = a.multiply(&b);
            let ba = b.multiply(&a);
            prop_assert_eq!(&ab, &ba);
            let n = a.order().min(b.order()).min(c.order());
            let left = a.truncated(n).multiply(&b.truncated(n)).multiply(&c.truncated(n));
            let right = a.truncated(n).multiply(&b.truncated(n).multiply(&c.truncated(n)));
            prop_assert_eq!(left, right);
            // distributivity
            let lhs = a.truncated(n).multiply(&b.truncated(n).add(&c.truncated(n)));
            let rhs = a.truncated(n).multiply(&b.truncated(n))
                .add(&a.truncated(n).multiply(&c.truncated(n)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fast_equals_schoolbook(a in small_series(), b in small_series()) {
            prop_assert_eq!(a.multiply_fast(&b), a.multiply_schoolbook(&b));
        }

        #[test]
        fn pow_is_repeated_multiply(a in small_series(), e in 1u64..=6) {
            let mut expect = a.clone();
            for _ in 1..e {
                expect = expect.multiply(&a);
            }
            prop_assert_eq!(a.pow(e), expect);
        }
    }
}
