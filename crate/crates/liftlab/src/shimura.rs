//! The coefficient relation between a half-integral-weight eigenform and its
//! integral-weight lift, in both directions, and the per-prime families
//! `a(t p^{2 nu})` built from it.
//!
//! Everything on this path is exact: the forward sum and its Moebius
//! inversion are BigInt identities, and for real characters the sign of
//! `a(t p^{2 nu}) / zeta^nu` is an integer sign, never a rounded float.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{divisors, moebius, PrimeSet};
use crate::characters::{DirichletCharacter, Rotation, TwistedCharacter};
use crate::error::{Error, Result};
use crate::modforms::NewformTable;

/// Everything needed to move between `A(n)` and `a(t n^2)`: the eigenform
/// table, the half-integral character chi (modulus 4N), the weight parameter
/// k, and the square-free twist t. Normalization a(t) = 1 is baked in.
pub struct LiftContext {
    form: NewformTable,
    twisted: TwistedCharacter,
    k: u32,
    t: i64,
}

impl LiftContext {
    pub fn new(form: NewformTable, chi: DirichletCharacter, k: u32, t: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let twisted = TwistedCharacter::new(chi, k, t)?;
        Ok(LiftContext {
            form,
            twisted,
            k,
            t,
        })
    }

    pub fn form(&self) -> &NewformTable {
        &self.form
    }

    pub fn chi(&self) -> &DirichletCharacter {
        self.twisted.base()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// N: the odd square-free part of the character modulus.
    pub fn level_n(&self) -> u64 {
        self.chi().level_n()
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn chi0(&self, p: u64) -> i32 {
        self.twisted.chi0(p)
    }

    /// Primes entering the families: not dividing 4Nt nor the form's level.
    pub fn is_good_prime(&self, p: u64) -> bool {
        let four_n = self.chi().modulus();
        four_n % p != 0 && self.t.unsigned_abs() % p != 0 && self.form.is_good_prime(p)
    }

    /// Mismatches between the catalog instance and the parameters the
    /// correspondence nominally assumes; reported, not rejected.
    pub fn parameter_notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.form.weight_2k() != 2 * self.k {
            notes.push(format!(
                "form weight {} differs from 2k = {}",
                self.form.weight_2k(),
                2 * self.k
            ));
        }
        if self.form.level() != 2 * self.level_n() {
            notes.push(format!(
                "form level {} differs from 2N = {}",
                self.form.level(),
                2 * self.level_n()
            ));
        }
        if self.chi().order() > 2 {
            notes.push(format!(
                "chi^2 is nontrivial (order {}) but the catalog form has trivial nebentypus",
                self.chi().order() / 2
            ));
        }
        notes
    }

    fn d_power(&self, d: u64) -> BigInt {
        BigInt::from(d).pow(self.k - 1)
    }

    /// Forward direction: `A_t(n) = sum_{d|n} chi_{t,N}(d) d^{k-1} a(t (n/d)^2)`,
    /// with the a-values supplied as a map `m -> a(t m^2)`.
    pub fn lift_forward(&self, a_values: &BTreeMap<u64, BigInt>, n: u64) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for d in divisors(n) {
            let chi = self.twisted.eval_int(d)?;
            if chi == 0 {
                continue;
            }
            let a = a_values.get(&(n / d)).ok_or_else(|| {
                Error::InvalidParameter(format!("missing a-value at index {}", n / d))
            })?;
            acc += BigInt::from(chi) * self.d_power(d) * a;
        }
        Ok(acc)
    }

    /// Inverse direction: `a(t n^2) = sum_{d|n} mu(d) chi_{t,N}(d) d^{k-1} A(n/d)`.
    pub fn lift_inverse(&self, n: u64) -> Result<BigInt> {
        if n > self.form.order() {
            return Err(Error::OrderExceeded {
                n,
                order: self.form.order(),
            });
        }
        let mut acc = BigInt::zero();
        for d in divisors(n) {
            let mu = moebius(d);
            if mu == 0 {
                continue;
            }
            let chi = self.twisted.eval_int(d)?;
            if chi == 0 {
                continue;
            }
            acc += BigInt::from(mu as i64 * chi) * self.d_power(d) * self.form.coeff(n / d)?;
        }
        Ok(acc)
    }

    /// Specialize at `n = p^nu` for a good prime: only d = 1 and d = p
    /// survive the Moebius factor, so
    /// `a(t p^{2 nu}) = A(p^nu) - chi_{t,N}(p) p^{k-1} A(p^{nu-1})`.
    pub fn specialize_prime_power(&self, p: u64, nu: u32) -> Result<SpecializedValue> {
        if nu % 2 == 0 {
            return Err(Error::InvalidParameter(format!("nu must be odd, got {nu}")));
        }
        if !self.is_good_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let p_nu = p
            .checked_pow(nu)
            .filter(|&v| v <= self.form.order())
            .ok_or(Error::OrderExceeded {
                n: p.saturating_pow(nu),
                order: self.form.order(),
            })?;
        let chi_p = self.twisted.eval_int(p)?;
        let exact = self.form.coeff(p_nu)?
            - BigInt::from(chi_p) * self.d_power(p) * self.form.coeff(p.pow(nu - 1))?;

        let zeta = self
            .chi()
            .eval(p)
            .expect("good primes are coprime to the modulus");
        let zeta_nu = zeta.pow(nu as i64);
        let zeta_sign = zeta_nu.real_value().ok_or(Error::ComplexCharacter {
            order: self.chi().order(),
        })?;
        let scalar = if zeta_sign == 1 { exact.clone() } else { -exact.clone() };

        // Normalization p^{nu (k - 1/2)} with the context's k.
        let half_exp = self.k as f64 - 0.5;
        let normalized = scalar.to_f64().unwrap_or(f64::NAN) / (p as f64).powf(nu as f64 * half_exp);
        let lam = |m: u32| -> Result<f64> {
            let a = self.form.coeff(p.pow(m))?.to_f64().unwrap_or(f64::NAN);
            Ok(a / (p as f64).powf(m as f64 * half_exp))
        };
        // lambda(p^nu)/zeta^nu - chi0(p)/sqrt(p) * lambda(p^{nu-1})/zeta^{nu-1}
        // with all zeta powers real here.
        let zeta_prev_sign = zeta.pow(nu as i64 - 1).real_value().unwrap_or(1);
        let normalized_lambda_route = zeta_sign as f64 * lam(nu)?
            - (self.chi0(p) as f64 / (p as f64).sqrt()) * zeta_prev_sign as f64 * lam(nu - 1)?;

        Ok(SpecializedValue {
            p,
            nu,
            exact,
            zeta,
            scalar,
            normalized,
            normalized_lambda_route,
        })
    }

    /// Build the per-prime family for an odd `nu` over all primes in `P`,
    /// recording exclusions (context primes and out-of-range powers).
    pub fn build_family(&self, nu: u32, primes: &PrimeSet) -> Result<HalfIntegralFamily> {
        if nu % 2 == 0 {
            return Err(Error::InvalidParameter(format!("nu must be odd, got {nu}")));
        }
        let mut entries = Vec::new();
        let mut excluded = Vec::new();
        for &p in primes.primes() {
            if !self.is_good_prime(p) {
                excluded.push((p, ExclusionReason::DividesContext));
                continue;
            }
            match p.checked_pow(nu) {
                Some(v) if v <= self.form.order() => {}
                _ => {
                    excluded.push((p, ExclusionReason::OutOfRange));
                    continue;
                }
            }
            let sp = self.specialize_prime_power(p, nu)?;
            entries.push(FamilyEntry {
                p,
                zeta: sp.zeta,
                scalar: sp.scalar,
                normalized: sp.normalized,
            });
        }
        if entries.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(HalfIntegralFamily {
            nu,
            x: primes.limit(),
            pi_x: primes.count() as u64,
            chi_order: self.chi().order(),
            image: self.chi().image(),
            entries,
            excluded,
        })
    }
}

/// One exact evaluation of the inverted lift at `n = p^nu`.
#[derive(Debug, Clone)]
pub struct SpecializedValue {
    pub p: u64,
    pub nu: u32,
    /// `a(t p^{2 nu})` exactly.
    pub exact: BigInt,
    /// `zeta = chi(p)`.
    pub zeta: Rotation,
    /// `a(t p^{2 nu}) / zeta^nu`, exact (real characters only).
    pub scalar: BigInt,
    /// `a(t p^{2 nu}) / (p^{nu(k-1/2)} zeta^nu)`, float route via the exact integer.
    pub normalized: f64,
    /// The same value via `lambda(p^nu)/zeta^nu - chi0(p)/sqrt(p) lambda(p^{nu-1})/zeta^{nu-1}`.
    pub normalized_lambda_route: f64,
}

/// Why a prime was left out of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionReason {
    /// p divides 4Nt or the form's level.
    DividesContext,
    /// p^nu exceeds the coefficient table.
    OutOfRange,
}

#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub p: u64,
    pub zeta: Rotation,
    /// Exact real scalar `a(t p^{2 nu}) / zeta^nu`.
    pub scalar: BigInt,
    /// Normalized float value of the scalar.
    pub normalized: f64,
}

/// The family `{a(t p^{2 nu})}` over ascending good primes, with fiber
/// labels and exclusion bookkeeping.
#[derive(Debug, Clone)]
pub struct HalfIntegralFamily {
    pub nu: u32,
    pub x: u64,
    /// pi(x) over the full prime set, exclusions included.
    pub pi_x: u64,
    pub chi_order: u64,
    pub image: Vec<Rotation>,
    pub entries: Vec<FamilyEntry>,
    pub excluded: Vec<(u64, ExclusionReason)>,
}

impl HalfIntegralFamily {
    /// CSV export: p, fiber as a/b, exact scalar, normalized float, sign.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "p,zeta,scalar,normalized,sign")?;
        for e in &self.entries {
            let sign = match e.scalar.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Minus => -1,
            };
            writeln!(
                w,
                "{},{},{},{},{}",
                e.p, e.zeta, e.scalar, e.normalized, sign
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta_context(order: usize) -> LiftContext {
        let form = NewformTable::catalog("delta", order).unwrap();
        let chi = DirichletCharacter::from_index(4, 0).unwrap();
        LiftContext::new(form, chi, 6, 1).unwrap()
    }

    #[test]
    fn inverse_at_one_and_small_primes() {
        let ctx = delta_context(200);
        assert_eq!(ctx.lift_inverse(1).unwrap(), BigInt::from(1));
        // a(9) = A(3) - chi_{1,1}(3) 3^5 A(1) = 252 - 243 = 9
        assert_eq!(ctx.lift_inverse(3).unwrap(), BigInt::from(9));
        // same through the prime-power path
        let sp = ctx.specialize_prime_power(3, 1).unwrap();
        assert_eq!(sp.exact, BigInt::from(9));
        assert_eq!(sp.scalar, BigInt::from(9));
        assert!(sp.normalized > 0.0);
    }

    #[test]
    fn forward_at_prime_structure() {
        // A_t(p) = a(t p^2) + chi_{t,N}(p) p^{k-1} a(t)
        let ctx = delta_context(200);
        let mut a = BTreeMap::new();
        a.insert(1u64, BigInt::from(1));
        a.insert(3u64, ctx.lift_inverse(3).unwrap());
        let back = ctx.lift_forward(&a, 3).unwrap();
        assert_eq!(back, *ctx.form().coeff(3).unwrap());
        assert_eq!(back, BigInt::from(9) + BigInt::from(243));
    }

    #[test]
    fn moebius_roundtrip_identity() {
        // forward(inverse) == A and inverse(forward) == a, exactly.
        for (label, k) in [("delta", 6u32), ("11a", 1), ("5a", 2)] {
            for t in [1i64, 2, 5] {
                let form = NewformTable::catalog(label, 600).unwrap();
                let chi = DirichletCharacter::from_index(4, 0).unwrap();
                let ctx = LiftContext::new(form, chi, k, t).unwrap();
                let n_max = 500u64;
                let mut a = BTreeMap::new();
                for n in 1..=n_max {
                    a.insert(n, ctx.lift_inverse(n).unwrap());
                }
                for n in 1..=n_max {
                    assert_eq!(
                        ctx.lift_forward(&a, n).unwrap(),
                        *ctx.form().coeff(n).unwrap(),
                        "{label} t={t} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn moebius_roundtrip_from_arbitrary_sequence() {
        // Pure algebra: inversion is two-sided for any integer sequence.
        let ctx = delta_context(600);
        let mut a = BTreeMap::new();
        for n in 1..=400u64 {
            a.insert(n, BigInt::from((n as i64).pow(2) - 7 * n as i64 + 3));
        }
        // forward-lift, then invert through the *same* divisor algebra
        let mut big = BTreeMap::new();
        for n in 1..=400u64 {
            big.insert(n, ctx.lift_forward(&a, n).unwrap());
        }
        for n in 1..=400u64 {
            let mut acc = BigInt::zero();
            for d in divisors(n) {
                let mu = moebius(d);
                if mu == 0 {
                    continue;
                }
                let chi = ctx.twisted.eval_int(d).unwrap();
                if chi == 0 {
                    continue;
                }
                acc += BigInt::from(mu as i64 * chi) * ctx.d_power(d) * &big[&(n / d)];
            }
            assert_eq!(acc, a[&n], "n={n}");
        }
    }

    #[test]
    fn specialize_rejects_bad_input() {
        let ctx = delta_context(100);
        assert!(matches!(
            ctx.specialize_prime_power(2, 1),
            Err(Error::BadPrime(2))
        )); // 2 | 4N
        assert!(matches!(
            ctx.specialize_prime_power(3, 2),
            Err(Error::InvalidParameter(_))
        )); // even nu
        assert!(matches!(
            ctx.specialize_prime_power(101, 1),
            Err(Error::OrderExceeded { .. })
        ));
    }

    #[test]
    fn specialize_routes_agree() {
        let ctx = delta_context(5000);
        let primes = PrimeSet::sieve(70).unwrap();
        for &p in primes.primes().iter().filter(|&&p| p > 2) {
            for nu in [1u32, 3] {
                if p.pow(nu) > ctx.form().order() {
                    continue;
                }
                let sp = ctx.specialize_prime_power(p, nu).unwrap();
                let denom = sp.normalized.abs().max(1.0);
                assert!(
                    (sp.normalized - sp.normalized_lambda_route).abs() / denom < 1e-9,
                    "p={p} nu={nu}: {} vs {}",
                    sp.normalized,
                    sp.normalized_lambda_route
                );
                // float sign agrees with the exact sign away from zero
                if sp.normalized.abs() > 1e-9 {
                    let exact_sign = match sp.scalar.sign() {
                        num_bigint::Sign::Plus => 1.0,
                        num_bigint::Sign::NoSign => 0.0,
                        num_bigint::Sign::Minus => -1.0,
                    };
                    assert_eq!(sp.normalized.signum(), exact_sign);
                }
            }
        }
    }

    #[test]
    fn family_construction_and_ranges() {
        let ctx = delta_context(1001);
        let primes = PrimeSet::sieve(1000).unwrap();
        let fam = ctx.build_family(1, &primes).unwrap();
        // p = 2 divides the modulus 4: excluded; all odd primes enter
        assert_eq!(fam.entries.len() + fam.excluded.len(), primes.count());
        assert_eq!(fam.excluded, vec![(2, ExclusionReason::DividesContext)]);
        assert!(fam.entries.windows(2).all(|w| w[0].p < w[1].p));
        // every entry satisfies the defining identity
        for e in &fam.entries {
            let sp = ctx.specialize_prime_power(e.p, 1).unwrap();
            assert_eq!(sp.scalar, e.scalar);
        }

        // nu = 3 shrinks the admissible range to p^3 <= order
        let fam3 = ctx.build_family(3, &primes).unwrap();
        assert!(fam3.entries.iter().all(|e| e.p.pow(3) <= 1000));
        let out_of_range = fam3
            .excluded
            .iter()
            .filter(|(_, r)| *r == ExclusionReason::OutOfRange)
            .count();
        assert!(out_of_range > 0);
        assert!(ctx.build_family(2, &primes).is_err());
    }

    #[test]
    fn family_csv_format() {
        let ctx = delta_context(101);
        let primes = PrimeSet::sieve(100).unwrap();
        let fam = ctx.build_family(1, &primes).unwrap();
        let mut buf = Vec::new();
        fam.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("p,zeta,scalar,normalized,sign"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("3,0/1,9,"), "{first}");
    }

    #[test]
    fn parameter_notes_flag_mismatches() {
        let ctx = delta_context(100);
        let notes = ctx.parameter_notes();
        // delta: weight 12 = 2k ok; level 1 != 2N = 2 flagged
        assert_eq!(notes.len(), 1);
        assert!(notes[0].contains("level"));
    }
}
