//! Sato-Tate angles and equidistribution statistics.
//!
//! Float routines are generic over [`num_traits::Float`] (f64 in the CLI,
//! f32 fine for spot checks); the measure-theoretic zero decisions never
//! happen here — those live in `characters` as rational arithmetic.

use num_complex::Complex;
use num_traits::{Float, FloatConst};

use crate::arith::PrimeSet;
use crate::characters::{DirichletCharacter, Rotation};
use crate::error::{Error, Result};
use crate::modforms::NewformTable;

/// Rounding slack accepted above the Deligne bound before declaring the
/// input corrupt.
const DELIGNE_SLACK: f64 = 1e-6;

/// The angle with `lambda/zeta = 2 cos(theta)`, `theta in [0, pi]`.
///
/// Inputs in `(2, 2 + 1e-6]` clamp to the endpoint (float rounding of an
/// exact bound); anything further out is upstream corruption and errors.
pub fn angle_of<F: Float>(lambda_over_zeta: F) -> Result<F> {
    let two = F::one() + F::one();
    let slack = F::from(DELIGNE_SLACK).unwrap();
    if lambda_over_zeta.abs() > two + slack {
        return Err(Error::DeligneViolation(
            lambda_over_zeta.abs().to_f64().unwrap_or(f64::NAN),
        ));
    }
    let x = (lambda_over_zeta / two).max(-F::one()).min(F::one());
    Ok(x.acos())
}

/// `lambda(p^nu) / zeta^nu = sin((nu+1) theta) / sin(theta)`, with the
/// limiting values `(nu+1)` at `theta = 0` and `(-1)^nu (nu+1)` at `pi`.
pub fn lambda_ratio<F: Float + FloatConst>(theta: F, nu: u32) -> F {
    let np1 = F::from(nu + 1).unwrap();
    if theta == F::zero() {
        return np1;
    }
    if theta == F::PI() {
        return if nu % 2 == 0 { np1 } else { -np1 };
    }
    (np1 * theta).sin() / theta.sin()
}

/// The full prime-power eigenvalue `lambda(p^nu) = zeta^nu sin((nu+1)theta)/sin(theta)`.
pub fn lambda_prime_power<F: Float + FloatConst>(
    theta: F,
    nu: u32,
    zeta: Rotation,
) -> Complex<F> {
    zeta.pow(nu as i64).to_complex::<F>() * lambda_ratio(theta, nu)
}

/// Sato-Tate CDF `F(theta) = (theta - sin(theta) cos(theta)) / pi`.
pub fn st_cdf<F: Float + FloatConst>(theta: F) -> F {
    (theta - theta.sin() * theta.cos()) / F::PI()
}

/// Sato-Tate density `(2/pi) sin^2(theta)`.
pub fn st_pdf<F: Float + FloatConst>(theta: F) -> F {
    let two = F::one() + F::one();
    two / F::PI() * theta.sin() * theta.sin()
}

/// Ascending disjoint open subintervals of `[0, pi]`.
#[derive(Debug, Clone)]
pub struct IntervalUnion<F> {
    intervals: Vec<(F, F)>,
    /// Intervals that collapsed to nothing for the given epsilon.
    pub dropped_empty: usize,
}

impl<F: Float + FloatConst> IntervalUnion<F> {
    pub fn intervals(&self) -> &[(F, F)] {
        &self.intervals
    }

    /// Total Sato-Tate measure, from the closed-form CDF.
    pub fn measure(&self) -> F {
        self.intervals
            .iter()
            .fold(F::zero(), |acc, &(a, b)| acc + st_cdf(b) - st_cdf(a))
    }

    pub fn contains(&self, x: F) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x && x < b)
    }
}

/// Which sign of `sin((nu+1) theta)` the union captures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalVariant {
    /// `I_eps`: `sin((nu+1) theta) > eps`.
    SinePositive,
    /// `I'_eps`: `sin((nu+1) theta) < -eps`.
    SineNegative,
}

/// The union of `(nu+1)/2` open intervals on which `sin((nu+1) theta)`
/// exceeds `eps` (variant `SinePositive`) or drops below `-eps`
/// (`SineNegative`). At `eps = 0` each variant has measure exactly 1/2.
pub fn interval_union<F: Float + FloatConst>(
    nu: u32,
    eps: F,
    variant: IntervalVariant,
) -> Result<IntervalUnion<F>> {
    if nu % 2 == 0 {
        return Err(Error::InvalidParameter(format!("nu must be odd, got {nu}")));
    }
    if eps < F::zero() || eps >= F::one() {
        return Err(Error::InvalidParameter(
            "epsilon must lie in [0, 1)".into(),
        ));
    }
    let arcsin = eps.asin();
    let np1 = F::from(nu + 1).unwrap();
    let pi = F::PI();
    let mut intervals = Vec::new();
    let mut dropped = 0usize;
    let half = (nu + 1) / 2;
    for j in 1..=half {
        let j = F::from(j).unwrap();
        let two = F::one() + F::one();
        let (lo, hi) = match variant {
            IntervalVariant::SinePositive => (
                ((two * j - two) * pi + arcsin) / np1,
                ((two * j - F::one()) * pi - arcsin) / np1,
            ),
            IntervalVariant::SineNegative => (
                ((two * j - F::one()) * pi + arcsin) / np1,
                (two * j * pi - arcsin) / np1,
            ),
        };
        if lo < hi {
            intervals.push((lo, hi));
        } else {
            dropped += 1;
        }
    }
    Ok(IntervalUnion {
        intervals,
        dropped_empty: dropped,
    })
}

/// Inverse-CDF sampling: solve `st_cdf(theta) = u` by bisection (the CDF is
/// strictly increasing). Endpoint inputs map to the endpoints.
pub fn sample_angle<F: Float + FloatConst>(u: F) -> F {
    if u <= F::zero() {
        return F::zero();
    }
    if u >= F::one() {
        return F::PI();
    }
    let mut lo = F::zero();
    let mut hi = F::PI();
    loop {
        let two = F::one() + F::one();
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            return mid;
        }
        if st_cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Counter-based uniform variate on [0, 1): the SplitMix64 output function
/// on stream position `index` with phase `seed`. Evaluation order over
/// indices is irrelevant, which keeps parallel sampling reproducible.
pub fn uniform_from_key(seed: u64, index: u64) -> f64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Kolmogorov-Smirnov distance of a sample against a CDF: the larger of the
/// two one-sided gaps at every sample point.
pub fn ks_distance<F: Float>(samples: &[F], cdf: impl Fn(F) -> F) -> F {
    assert!(!samples.is_empty(), "K-S needs a nonempty sample");
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("angles are finite"));
    let n = F::from(sorted.len()).unwrap();
    let mut sup = F::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x);
        let below = fx - F::from(i).unwrap() / n;
        let above = F::from(i + 1).unwrap() / n - fx;
        sup = sup.max(below.abs()).max(above.abs());
    }
    sup
}

/// Two-sided interval discrepancy `D+ + D-`: the sup over arbitrary
/// subintervals of |empirical - measure|. Reported alongside K-S; slower to
/// converge, no acceptance threshold attached.
pub fn interval_discrepancy<F: Float>(samples: &[F], cdf: impl Fn(F) -> F) -> F {
    assert!(!samples.is_empty());
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("angles are finite"));
    let n = F::from(sorted.len()).unwrap();
    let mut d_plus = F::zero();
    let mut d_minus = F::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x);
        d_plus = d_plus.max(F::from(i + 1).unwrap() / n - fx);
        d_minus = d_minus.max(fx - F::from(i).unwrap() / n);
    }
    d_plus + d_minus
}

/// One Sato-Tate angle of an eigenform at a prime, with its fiber label.
#[derive(Debug, Clone)]
pub struct AngleSample {
    pub p: u64,
    pub fiber: Rotation,
    pub theta: f64,
}

/// Angle extraction over a prime range.
#[derive(Debug, Clone)]
pub struct AngleSet {
    pub samples: Vec<AngleSample>,
    pub excluded: u64,
    /// Angles landing exactly on 0 or pi (expected for at most finitely
    /// many primes; counted rather than assumed absent).
    pub endpoint_count: u64,
}

/// Compute `theta_p = arccos(lambda(p) / (2 zeta))` for all usable primes.
///
/// Without a character, every good prime of the form enters with the
/// trivial fiber. With a (real) character chi, primes dividing its modulus
/// are excluded and the fiber is `zeta = chi(p)`.
pub fn angles_of_form(
    form: &NewformTable,
    primes: &PrimeSet,
    chi: Option<&DirichletCharacter>,
) -> Result<AngleSet> {
    if let Some(chi) = chi {
        if !chi.is_real() {
            return Err(Error::ComplexCharacter { order: chi.order() });
        }
    }
    let mut samples = Vec::new();
    let mut excluded = 0u64;
    let mut endpoint_count = 0u64;
    for &p in primes.primes() {
        if p > form.order() || !form.is_good_prime(p) {
            excluded += 1;
            continue;
        }
        let fiber = match chi {
            None => Rotation::one(),
            Some(chi) => match chi.eval(p) {
                Some(z) => z,
                None => {
                    excluded += 1;
                    continue;
                }
            },
        };
        let lam = form.lambda(p)?;
        let over_zeta = lam * fiber.real_value().expect("real character") as f64;
        let theta = angle_of(over_zeta)?;
        if theta == 0.0 || theta == std::f64::consts::PI {
            endpoint_count += 1;
        }
        samples.push(AngleSample {
            p,
            fiber,
            theta,
        });
    }
    Ok(AngleSet {
        samples,
        excluded,
        endpoint_count,
    })
}
