//! Empirical density estimation for the per-prime sign sets, their fiber
//! decomposition, predicted densities, oscillation evidence, and the
//! synthetic sampling driver.
//!
//! A family entry classifies as `sign(scalar) * sign(Re(zeta^nu e^{-i phi}))`
//! where the rotation factor's sign is decided exactly in rational
//! arithmetic; a fiber is a "zero fiber" precisely when that factor
//! vanishes, independent of any float.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::PrimeSet;
use crate::characters::{rotation_phase_sign, DirichletCharacter, PhaseFraction, Rotation};
use crate::error::{Error, Result};
use crate::satotate::{lambda_ratio, sample_angle, uniform_from_key};
use crate::shimura::HalfIntegralFamily;

/// Float scalars below this magnitude count as zero (reported separately;
/// the continuous sampling model should never produce them).
pub const ZERO_SCALAR_THRESHOLD: f64 = 1e-12;

pub const DENSITY_REPORT_SCHEMA: &str = "liftlab.density-report.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    Pos,
    Neg,
    Zero,
}

/// Sign of a float scalar with the zero threshold applied.
pub fn classify_scalar(s: f64) -> i32 {
    if s.abs() < ZERO_SCALAR_THRESHOLD {
        0
    } else if s > 0.0 {
        1
    } else {
        -1
    }
}

/// `sign(scalar) * sign(Re(zeta^nu e^{-i phi}))`, zero iff either factor is.
pub fn classify_sign(scalar_sign: i32, zeta: Rotation, nu: u32, phi: PhaseFraction) -> SignClass {
    let (rot_sign, _) = rotation_phase_sign(zeta, nu, phi);
    match scalar_sign * rot_sign {
        0 => SignClass::Zero,
        s if s > 0 => SignClass::Pos,
        _ => SignClass::Neg,
    }
}

/// A family entry reduced to what classification needs.
#[derive(Debug, Clone, Copy)]
pub struct ClassifiedEntry {
    pub p: u64,
    pub zeta: Rotation,
    /// Exact sign of the real scalar `a(t p^{2 nu}) / zeta^nu`.
    pub scalar_sign: i32,
}

/// Reduce an exact family to classification entries (BigInt signs are exact).
pub fn classified_entries(family: &HalfIntegralFamily) -> Vec<ClassifiedEntry> {
    family
        .entries
        .iter()
        .map(|e| ClassifiedEntry {
            p: e.p,
            zeta: e.zeta,
            scalar_sign: match e.scalar.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Minus => -1,
            },
        })
        .collect()
}

/// Run parameters echoed into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityParams {
    /// "exact" or "synthetic".
    pub mode: String,
    pub form: Option<String>,
    pub char_modulus: u64,
    pub char_index: u64,
    pub char_exponents: Vec<u64>,
    pub k: u32,
    pub level_n: u64,
    pub t: i64,
    pub nu: u32,
    /// phi as a fraction of pi, "num/den".
    pub phi: String,
    pub x: u64,
    pub seed: Option<u64>,
    pub order: Option<u64>,
}

/// Per-fiber counts and densities (all densities relative to pi(x)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberReport {
    pub zeta: Rotation,
    /// Exact sign of Re(zeta^nu e^{-i phi}) on this fiber.
    pub rotation_sign: i32,
    pub is_zero_fiber: bool,
    pub n_fiber: u64,
    pub n_pos: u64,
    pub n_neg: u64,
    pub n_zero: u64,
    /// Entries whose scalar itself vanished (exact zero or below threshold).
    pub n_zero_scalar: u64,
    pub empirical_fiber: f64,
    pub predicted_fiber: f64,
    pub empirical_pos: f64,
    pub empirical_neg: f64,
    /// 1/(2 r_chi) on nonzero fibers, 0 on zero fibers.
    pub predicted_signed: f64,
    pub dev_pos: f64,
    pub dev_neg: f64,
}

/// Whole-family counts and densities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalReport {
    pub n_pos: u64,
    pub n_neg: u64,
    pub n_zero: u64,
    pub density_pos: f64,
    pub density_neg: f64,
    pub density_nonzero: f64,
    /// (#nonzero fibers) / (2 r_chi).
    pub predicted_pos: f64,
    /// (#nonzero fibers) / r_chi.
    pub predicted_nonzero: f64,
    pub dev_pos: f64,
    pub dev_neg: f64,
    /// |density_pos - density_nonzero / 2|: the empirical form of the
    /// density identity for P_{>0}.
    pub dev_half_nonzero: f64,
    /// Consecutive-sign alternations of nonzero signs over ascending p.
    pub sign_changes: u64,
}

/// Cumulative counts at a fraction of the prime cutoff.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointReport {
    pub x: u64,
    pub n_pos: u64,
    pub n_neg: u64,
    pub n_zero: u64,
    pub sign_changes: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityReport {
    pub schema: String,
    pub params: DensityParams,
    pub r_chi: u64,
    pub pi_x: u64,
    pub n_excluded: u64,
    pub fibers: Vec<FiberReport>,
    pub global: GlobalReport,
    pub checkpoints: Vec<CheckpointReport>,
    pub warnings: Vec<String>,
}

/// Count signs per fiber and assemble the report. Entries must be ascending
/// in p (families are built that way); `image` fixes the fiber ordering.
pub fn fiber_densities(
    entries: &[ClassifiedEntry],
    image: &[Rotation],
    chi_order: u64,
    phi: PhaseFraction,
    pi_x: u64,
    n_excluded: u64,
    x: u64,
    params: DensityParams,
    mut warnings: Vec<String>,
) -> DensityReport {
    let nu = params.nu;
    let r = chi_order as f64;
    let pi_x_f = pi_x as f64;

    let rot_signs: Vec<i32> = image
        .iter()
        .map(|&z| rotation_phase_sign(z, nu, phi).0)
        .collect();
    let nonzero_fibers = rot_signs.iter().filter(|&&s| s != 0).count() as f64;

    let mut fibers: Vec<FiberReport> = image
        .iter()
        .zip(&rot_signs)
        .map(|(&zeta, &rot_sign)| FiberReport {
            zeta,
            rotation_sign: rot_sign,
            is_zero_fiber: rot_sign == 0,
            n_fiber: 0,
            n_pos: 0,
            n_neg: 0,
            n_zero: 0,
            n_zero_scalar: 0,
            empirical_fiber: 0.0,
            predicted_fiber: 1.0 / r,
            empirical_pos: 0.0,
            empirical_neg: 0.0,
            predicted_signed: if rot_sign == 0 { 0.0 } else { 0.5 / r },
            dev_pos: 0.0,
            dev_neg: 0.0,
        })
        .collect();

    let index_of = |z: Rotation| -> usize {
        image
            .iter()
            .position(|&w| w == z)
            .expect("entry fiber must lie in Im(chi)")
    };

    let mut global = GlobalReport {
        n_pos: 0,
        n_neg: 0,
        n_zero: 0,
        density_pos: 0.0,
        density_neg: 0.0,
        density_nonzero: 0.0,
        predicted_pos: nonzero_fibers / (2.0 * r),
        predicted_nonzero: nonzero_fibers / r,
        dev_pos: 0.0,
        dev_neg: 0.0,
        dev_half_nonzero: 0.0,
        sign_changes: 0,
    };

    let quarter = x / 4;
    let half = x / 2;
    let mut checkpoints = vec![
        CheckpointReport { x: quarter, n_pos: 0, n_neg: 0, n_zero: 0, sign_changes: 0 },
        CheckpointReport { x: half, n_pos: 0, n_neg: 0, n_zero: 0, sign_changes: 0 },
        CheckpointReport { x, n_pos: 0, n_neg: 0, n_zero: 0, sign_changes: 0 },
    ];

    let mut last_nonzero = 0i32;
    let mut sign_changes = 0u64;
    for e in entries {
        let idx = index_of(e.zeta);
        let rot_sign = rot_signs[idx];
        let f = &mut fibers[idx];
        f.n_fiber += 1;
        if e.scalar_sign == 0 {
            f.n_zero_scalar += 1;
        }
        let sign = e.scalar_sign * rot_sign;
        match sign {
            s if s > 0 => {
                f.n_pos += 1;
                global.n_pos += 1;
            }
            s if s < 0 => {
                f.n_neg += 1;
                global.n_neg += 1;
            }
            _ => {
                f.n_zero += 1;
                global.n_zero += 1;
            }
        }
        if sign != 0 {
            if last_nonzero != 0 && sign != last_nonzero {
                sign_changes += 1;
            }
            last_nonzero = sign;
        }
        for cp in checkpoints.iter_mut() {
            if e.p <= cp.x {
                match sign {
                    s if s > 0 => cp.n_pos += 1,
                    s if s < 0 => cp.n_neg += 1,
                    _ => cp.n_zero += 1,
                }
                if sign != 0 {
                    cp.sign_changes = sign_changes;
                }
            }
        }
    }
    global.sign_changes = sign_changes;

    for f in fibers.iter_mut() {
        f.empirical_fiber = f.n_fiber as f64 / pi_x_f;
        f.empirical_pos = f.n_pos as f64 / pi_x_f;
        f.empirical_neg = f.n_neg as f64 / pi_x_f;
        f.dev_pos = (f.empirical_pos - f.predicted_signed).abs();
        f.dev_neg = (f.empirical_neg - f.predicted_signed).abs();
        if f.is_zero_fiber && f.n_fiber > 0 && f.n_zero != f.n_fiber {
            warnings.push(format!(
                "zero fiber {} has nonzero classifications (bug or corrupt input)",
                f.zeta
            ));
        }
    }
    global.density_pos = global.n_pos as f64 / pi_x_f;
    global.density_neg = global.n_neg as f64 / pi_x_f;
    global.density_nonzero = (global.n_pos + global.n_neg) as f64 / pi_x_f;
    global.dev_pos = (global.density_pos - global.predicted_pos).abs();
    global.dev_neg = (global.density_neg - global.predicted_neg_value()).abs();
    global.dev_half_nonzero = (global.density_pos - global.density_nonzero / 2.0).abs();

    DensityReport {
        schema: DENSITY_REPORT_SCHEMA.to_string(),
        params,
        r_chi: chi_order,
        pi_x,
        n_excluded,
        fibers,
        global,
        checkpoints,
        warnings,
    }
}

impl GlobalReport {
    /// delta(P_{<0}) prediction equals the positive one.
    fn predicted_neg_value(&self) -> f64 {
        self.predicted_pos
    }
}

/// Report for an exact family at a phase.
pub fn fiber_densities_exact(
    family: &HalfIntegralFamily,
    phi: PhaseFraction,
    params: DensityParams,
    warnings: Vec<String>,
) -> DensityReport {
    let entries = classified_entries(family);
    fiber_densities(
        &entries,
        &family.image,
        family.chi_order,
        phi,
        family.pi_x,
        family.excluded.len() as u64,
        family.x,
        params,
        warnings,
    )
}

/// Alternation counts of nonzero signs over ascending p, per phase.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OscillationRow {
    pub phi: String,
    pub both_signs: bool,
    pub checkpoints: Vec<CheckpointReport>,
}

/// For each phase: walk the family in ascending p, count alternations of
/// consecutive nonzero signs, and report cumulative counts at x/4, x/2, x.
pub fn oscillation_report(
    entries: &[ClassifiedEntry],
    nu: u32,
    phis: &[PhaseFraction],
    x: u64,
) -> Vec<OscillationRow> {
    debug_assert!(entries.windows(2).all(|w| w[0].p < w[1].p));
    phis.iter()
        .map(|&phi| {
            let mut cps = vec![
                CheckpointReport { x: x / 4, n_pos: 0, n_neg: 0, n_zero: 0, sign_changes: 0 },
                CheckpointReport { x: x / 2, n_pos: 0, n_neg: 0, n_zero: 0, sign_changes: 0 },
                CheckpointReport { x, n_pos: 0, n_neg: 0, n_zero: 0, sign_changes: 0 },
            ];
            // rotation sign per fiber is constant; cache lazily
            let mut cache: Vec<(Rotation, i32)> = Vec::new();
            let mut last = 0i32;
            let mut alternations = 0u64;
            let mut seen_pos = false;
            let mut seen_neg = false;
            for e in entries {
                let rot_sign = match cache.iter().find(|(z, _)| *z == e.zeta) {
                    Some(&(_, s)) => s,
                    None => {
                        let s = rotation_phase_sign(e.zeta, nu, phi).0;
                        cache.push((e.zeta, s));
                        s
                    }
                };
                let sign = e.scalar_sign * rot_sign;
                if sign > 0 {
                    seen_pos = true;
                } else if sign < 0 {
                    seen_neg = true;
                }
                if sign != 0 {
                    if last != 0 && sign != last {
                        alternations += 1;
                    }
                    last = sign;
                }
                for cp in cps.iter_mut() {
                    if e.p <= cp.x {
                        match sign {
                            s if s > 0 => cp.n_pos += 1,
                            s if s < 0 => cp.n_neg += 1,
                            _ => cp.n_zero += 1,
                        }
                        cp.sign_changes = alternations;
                    }
                }
            }
            OscillationRow {
                phi: phi.to_string(),
                both_signs: seen_pos && seen_neg,
                checkpoints: cps,
            }
        })
        .collect()
}

/// One sampled prime of a synthetic run.
#[derive(Debug, Clone)]
pub struct SyntheticEntry {
    pub p: u64,
    pub zeta: Rotation,
    pub theta: f64,
    /// `a(t p^{2 nu}) / (p^{nu(k-1/2)} zeta^nu)` under the sampling model.
    pub scalar: f64,
}

#[derive(Debug)]
pub struct SyntheticRun {
    pub entries: Vec<SyntheticEntry>,
    pub classified: Vec<ClassifiedEntry>,
    pub report: DensityReport,
}

/// Monte-Carlo realization of the correspondence at the hypotheses' level:
/// true fibers from true character values at true primes, angles i.i.d.
/// Sato-Tate via a counter-based generator keyed (seed, prime index), and
/// the normalized scalar
/// `sin((nu+1)theta)/sin(theta) - chi0(p)/sqrt(p) * sin(nu theta)/sin(theta)`.
#[allow(clippy::too_many_arguments)]
pub fn run_synthetic(
    chi: &DirichletCharacter,
    k: u32,
    t: i64,
    nu: u32,
    phi: PhaseFraction,
    primes: &PrimeSet,
    seed: u64,
) -> Result<SyntheticRun> {
    if nu % 2 == 0 {
        return Err(Error::InvalidParameter(format!("nu must be odd, got {nu}")));
    }
    let twisted = crate::characters::TwistedCharacter::new(chi.clone(), k, t)?;

    let x = primes.limit();
    let indexed: Vec<(u64, u64)> = primes
        .primes()
        .iter()
        .enumerate()
        .map(|(i, &p)| (i as u64, p))
        .collect();
    let results: Vec<Option<SyntheticEntry>> = indexed
        .par_iter()
        .map(|&(index, p)| {
            let four_n_t = chi.modulus() as i64 * t;
            if (four_n_t.unsigned_abs()) % p == 0 {
                return None;
            }
            let zeta = chi.eval(p).expect("p coprime to the modulus");
            let theta = sample_angle(uniform_from_key(seed, index));
            let chi0 = twisted.chi0(p) as f64;
            let scalar =
                lambda_ratio(theta, nu) - chi0 / (p as f64).sqrt() * lambda_ratio(theta, nu - 1);
            Some(SyntheticEntry {
                p,
                zeta,
                theta,
                scalar,
            })
        })
        .collect();

    let mut entries = Vec::with_capacity(results.len());
    let mut n_excluded = 0u64;
    for r in results {
        match r {
            Some(e) => entries.push(e),
            None => n_excluded += 1,
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyFamily);
    }

    let classified: Vec<ClassifiedEntry> = entries
        .iter()
        .map(|e| ClassifiedEntry {
            p: e.p,
            zeta: e.zeta,
            scalar_sign: classify_scalar(e.scalar),
        })
        .collect();

    let params = DensityParams {
        mode: "synthetic".into(),
        form: None,
        char_modulus: chi.modulus(),
        char_index: chi.index(),
        char_exponents: chi.exponents().to_vec(),
        k,
        level_n: chi.level_n(),
        t,
        nu,
        phi: phi.to_string(),
        x,
        seed: Some(seed),
        order: None,
    };
    let report = fiber_densities(
        &classified,
        &chi.image(),
        chi.order(),
        phi,
        primes.count() as u64,
        n_excluded,
        x,
        params,
        Vec::new(),
    );
    Ok(SyntheticRun {
        entries,
        classified,
        report,
    })
}
