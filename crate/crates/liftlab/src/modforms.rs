//! Concrete integral-weight eigenforms realized as eta quotients, their
//! unnormalized coefficients A(n), normalized eigenvalues lambda(n), and
//! Hecke-property verification.
//!
//! The catalog is deliberately tiny: delta (weight 12, level 1) and the
//! weight-2 level-11 and weight-4 level-5 eta products. All carry trivial
//! nebentypus mod their level, so `nebentypus(p)` is 1 at good primes and 0
//! at primes dividing the level.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qseries::EtaQuotient;

/// Coefficient table of a normalized eigenform: `A(n)` for `1 <= n <= order`,
/// exact integers, with weight/level metadata.
#[derive(Debug, Clone)]
pub struct NewformTable {
    label: String,
    weight_2k: u32,
    level: u64,
    /// coeffs[n] = A(n); index 0 is unused and kept zero.
    coeffs: Vec<BigInt>,
}

/// First failure found by [`NewformTable::verify_hecke`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeckeViolation {
    NotNormalized,
    Multiplicativity { m: u64, n: u64 },
    Recursion { p: u64, nu: u32 },
}

impl std::fmt::Display for HeckeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HeckeViolation::NotNormalized => write!(f, "A(1) != 1"),
            HeckeViolation::Multiplicativity { m, n } => {
                write!(f, "A({m}*{n}) != A({m})A({n}) with gcd({m},{n}) = 1")
            }
            HeckeViolation::Recursion { p, nu } => {
                write!(f, "recursion fails at p = {p}, nu = {nu}")
            }
        }
    }
}

/// Outcome of the exhaustive Hecke check.
#[derive(Debug, Clone)]
pub struct HeckeReport {
    pub checked_pairs: u64,
    pub checked_prime_powers: u64,
    pub violation: Option<HeckeViolation>,
}

impl HeckeReport {
    pub fn is_ok(&self) -> bool {
        self.violation.is_none()
    }
}

pub const CATALOG_LABELS: [&str; 3] = ["delta", "11a", "5a"];

/// The eta quotient realizing a catalog label.
pub fn catalog_eta_quotient(label: &str) -> Result<(EtaQuotient, u32, u64)> {
    let (factors, weight_2k, level): (&[(u64, i64)], u32, u64) = match label {
        "delta" => (&[(1, 24)], 12, 1),
        "11a" => (&[(1, 2), (11, 2)], 2, 11),
        "5a" => (&[(1, 4), (5, 4)], 4, 5),
        _ => return Err(Error::UnknownForm(label.to_string())),
    };
    Ok((EtaQuotient::new(factors)?, weight_2k, level))
}

impl NewformTable {
    /// Expand a catalog form to coefficients `A(1) .. A(order-1)`.
    pub fn catalog(label: &str, order: usize) -> Result<NewformTable> {
        if order < 2 {
            return Err(Error::InvalidParameter(format!(
                "order must be at least 2, got {order}"
            )));
        }
        let (eq, weight_2k, level) = catalog_eta_quotient(label)?;
        let series = eq.expand::<BigInt>(order)?;
        Ok(NewformTable {
            label: label.to_string(),
            weight_2k,
            level,
            coeffs: series.into_coeffs(),
        })
    }

    /// Wrap an externally supplied coefficient table. The table is trusted
    /// but [`Self::verify_hecke`] is run; a violation rejects the input.
    pub fn from_coefficients(
        label: &str,
        weight_2k: u32,
        level: u64,
        coeffs: Vec<BigInt>,
    ) -> Result<NewformTable> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter(
                "coefficient table needs at least A(1)".into(),
            ));
        }
        let table = NewformTable {
            label: label.to_string(),
            weight_2k,
            level,
            coeffs,
        };
        let report = table.verify_hecke();
        match report.violation {
            None => Ok(table),
            Some(v) => Err(Error::Hecke(v.to_string())),
        }
    }

    /// Read the CSV interchange format: lines `n,A(n)` with the coefficient
    /// as a decimal string; a header line is skipped. Hecke-verified on load.
    pub fn read_csv<R: BufRead>(
        reader: R,
        label: &str,
        weight_2k: u32,
        level: u64,
    ) -> Result<NewformTable> {
        let mut entries: Vec<(u64, BigInt)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (n_str, a_str) = line
                .split_once(',')
                .ok_or_else(|| Error::Csv(format!("line {}: expected `n,A(n)`", lineno + 1)))?;
            let n: u64 = match n_str.trim().parse() {
                Ok(n) => n,
                // tolerate a single header row
                Err(_) if lineno == 0 => continue,
                Err(_) => {
                    return Err(Error::Csv(format!("line {}: bad index `{n_str}`", lineno + 1)))
                }
            };
            let a: BigInt = a_str
                .trim()
                .parse()
                .map_err(|_| Error::Csv(format!("line {}: bad coefficient `{a_str}`", lineno + 1)))?;
            entries.push((n, a));
        }
        let max_n = entries.iter().map(|(n, _)| *n).max().unwrap_or(0);
        if max_n < 1 {
            return Err(Error::Csv("no coefficient rows".into()));
        }
        let mut coeffs = vec![BigInt::zero(); max_n as usize + 1];
        let mut seen = vec![false; max_n as usize + 1];
        for (n, a) in entries {
            if n == 0 {
                return Err(Error::Csv("index 0 is not a Fourier index".into()));
            }
            if seen[n as usize] {
                return Err(Error::Csv(format!("duplicate index {n}")));
            }
            seen[n as usize] = true;
            coeffs[n as usize] = a;
        }
        if !seen[1..].iter().all(|&s| s) {
            let missing = seen[1..].iter().position(|&s| !s).unwrap() + 1;
            return Err(Error::Csv(format!("missing coefficient A({missing})")));
        }
        Self::from_coefficients(label, weight_2k, level, coeffs)
    }

    /// Write the CSV interchange format (header plus one row per n).
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,a_n")?;
        for n in 1..=self.order() {
            writeln!(w, "{},{}", n, self.coeffs[n as usize])?;
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight_2k(&self) -> u32 {
        self.weight_2k
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Largest n with A(n) in the table.
    pub fn order(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        self.level % p != 0
    }

    /// Trivial-mod-level nebentypus (chi^2 for every catalog form): 1 at
    /// good primes, 0 at primes dividing the level.
    pub fn nebentypus(&self, p: u64) -> i32 {
        i32::from(self.is_good_prime(p))
    }

    pub fn coeff(&self, n: u64) -> Result<&BigInt> {
        self.coeffs.get(n as usize).ok_or(Error::OrderExceeded {
            n,
            order: self.order(),
        })
    }

    /// The normalization exponent k - 1/2 = (weight - 1)/2.
    pub fn half_exponent(&self) -> f64 {
        (self.weight_2k as f64 - 1.0) / 2.0
    }

    /// Normalized eigenvalue `lambda(n) = A(n) / n^{k-1/2}`; at good primes
    /// `|lambda(p)| <= 2` by the Deligne bound.
    pub fn lambda(&self, n: u64) -> Result<f64> {
        let a = self.coeff(n)?;
        let a = a.to_f64().ok_or_else(|| {
            Error::InvalidParameter(format!("A({n}) does not fit in a float"))
        })?;
        Ok(a / (n as f64).powf(self.half_exponent()))
    }

    /// Exhaustive Hecke check within the table order:
    /// A(1) = 1; A(mn) = A(m)A(n) for coprime m,n; and the good-prime
    /// recursion A(p^{nu+1}) = A(p)A(p^nu) - chi^2(p) p^{2k-1} A(p^{nu-1}).
    pub fn verify_hecke(&self) -> HeckeReport {
        let order = self.order();
        let mut report = HeckeReport {
            checked_pairs: 0,
            checked_prime_powers: 0,
            violation: None,
        };
        if !self.coeffs[1].is_one() {
            report.violation = Some(HeckeViolation::NotNormalized);
            return report;
        }
        for m in 2..=order {
            if m * m > order {
                break;
            }
            for n in m + 1..=order / m {
                if m.gcd(&n) != 1 {
                    continue;
                }
                report.checked_pairs += 1;
                if self.coeffs[(m * n) as usize]
                    != &self.coeffs[m as usize] * &self.coeffs[n as usize]
                {
                    report.violation = Some(HeckeViolation::Multiplicativity { m, n });
                    return report;
                }
            }
        }
        let primes = crate::arith::PrimeSet::sieve(order.max(2))
            .expect("order >= 2")
            .primes()
            .to_vec();
        for p in primes {
            let eps = BigInt::from(self.nebentypus(p));
            let scale = &eps * BigInt::from(p).pow(self.weight_2k - 1);
            let mut nu = 1u32;
            loop {
                let p_pow_next = match p.checked_pow(nu + 1) {
                    Some(v) if v <= order => v,
                    _ => break,
                };
                report.checked_prime_powers += 1;
                let lhs = &self.coeffs[p_pow_next as usize];
                let rhs = &self.coeffs[p as usize] * &self.coeffs[p.pow(nu) as usize]
                    - &scale * &self.coeffs[p.pow(nu - 1) as usize];
                if *lhs != rhs {
                    report.violation = Some(HeckeViolation::Recursion { p, nu });
                    return report;
                }
                nu += 1;
            }
        }
        report
    }

    /// Exact Deligne check `A(p)^2 <= 4 p^{2k-1}` for all good primes in the
    /// table; a failure means the table cannot be an eigenform of this weight.
    pub fn deligne_check(&self) -> Result<()> {
        let order = self.order();
        let primes = crate::arith::PrimeSet::sieve(order.max(2)).expect("order >= 2");
        for &p in primes.primes() {
            if !self.is_good_prime(p) {
                continue;
            }
            let a = &self.coeffs[p as usize];
            let bound = BigInt::from(4) * BigInt::from(p).pow(self.weight_2k - 1);
            if a * a > bound {
                let lam = self.lambda(p).unwrap_or(f64::NAN);
                return Err(Error::DeligneViolation(lam.abs()));
            }
        }
        Ok(())
    }

    /// Test/fault-injection hook: add `delta` to A(n).
    #[doc(hidden)]
    pub fn corrupt_coefficient(&mut self, n: u64, delta: i64) {
        let v = &self.coeffs[n as usize] + BigInt::from(delta);
        self.coeffs[n as usize] = v;
    }
}
