//! Dirichlet characters modulo 4N (N odd, square-free), their fibers over
//! roots of unity, and exact sign evaluation of rotated character values.
//!
//! Character values are [`Rotation`]s: rationals num/den standing for
//! `e^{2 pi i num/den}`. All products, powers and real-part signs are decided
//! in integer arithmetic, so "this fiber is identically zero" is an exact
//! statement, never a floating-point one.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_square_free, kronecker, PrimeSet};
use crate::error::{Error, Result};

/// A root of unity `e^{2 pi i num/den}` in lowest terms, `0 <= num < den`.
///
/// The representation is canonical: two rotations are equal as complex
/// numbers iff they are equal as structs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation {
    num: i64,
    den: i64,
}

impl Rotation {
    pub fn one() -> Self {
        Rotation { num: 0, den: 1 }
    }

    pub fn minus_one() -> Self {
        Rotation { num: 1, den: 2 }
    }

    /// Reduce `num/den` mod 1 to canonical form. `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        assert!(den != 0, "rotation denominator must be nonzero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        num = num.rem_euclid(den);
        let g = num.gcd(&den);
        num /= g;
        den /= g;
        Rotation {
            num: i64::try_from(num).expect("rotation numerator overflow"),
            den: i64::try_from(den).expect("rotation denominator overflow"),
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    /// Multiplicative order as a root of unity.
    pub fn order(&self) -> i64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    /// Real means +1 or -1.
    pub fn is_real(&self) -> bool {
        self.num == 0 || (self.num * 2 == self.den)
    }

    /// +1 or -1 when real.
    pub fn real_value(&self) -> Option<i64> {
        if self.num == 0 {
            Some(1)
        } else if self.num * 2 == self.den {
            Some(-1)
        } else {
            None
        }
    }

    /// Complex product: add fractions mod 1.
    pub fn mul(self, other: Rotation) -> Rotation {
        Self::from_i128(
            self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128,
            self.den as i128 * other.den as i128,
        )
    }

    pub fn pow(self, e: i64) -> Rotation {
        Self::from_i128(self.num as i128 * e as i128, self.den as i128)
    }

    pub fn conj(self) -> Rotation {
        Self::from_i128(-(self.num as i128), self.den as i128)
    }

    /// Exact sign of the real part: cos(2 pi num/den) compared with zero by
    /// rational comparison of num/den against 1/4 and 3/4.
    pub fn re_sign(&self) -> i32 {
        let q = 4 * self.num;
        if q < self.den || q > 3 * self.den {
            1
        } else if q == self.den || q == 3 * self.den {
            0
        } else {
            -1
        }
    }

    /// The angle `2 pi num/den` as a float.
    pub fn angle_f64(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.num as f64) / (self.den as f64)
    }

    pub fn re_f64(&self) -> f64 {
        self.angle_f64().cos()
    }

    pub fn to_complex<F: num_traits::Float + num_traits::FloatConst>(&self) -> num_complex::Complex<F> {
        let two_pi = F::PI() + F::PI();
        let angle = two_pi * F::from(self.num).unwrap() / F::from(self.den).unwrap();
        num_complex::Complex::new(angle.cos(), angle.sin())
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e(2pi i * {}/{})", self.num, self.den)
    }
}

impl Serialize for Rotation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

impl<'de> Deserialize<'de> for Rotation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (n, den) = s
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom("rotation must look like num/den"))?;
        let num: i64 = n.parse().map_err(serde::de::Error::custom)?;
        let den: i64 = den.parse().map_err(serde::de::Error::custom)?;
        if den <= 0 {
            return Err(serde::de::Error::custom("rotation denominator must be positive"));
        }
        Ok(Rotation::new(num, den))
    }
}

/// A phase `phi = (num/den) * pi`, kept as an exact fraction so that
/// `Re(zeta^nu e^{-i phi}) = 0` stays decidable. Canonicalized mod 2 pi.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PhaseFraction {
    num: i64,
    den: i64,
}

impl PhaseFraction {
    pub fn zero() -> Self {
        PhaseFraction { num: 0, den: 1 }
    }

    /// `phi = (num/den) pi`, reduced mod 2 pi.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidParameter(
                "phase denominator must be positive".into(),
            ));
        }
        let mut num = num.rem_euclid(2 * den);
        let g = num.gcd(&den);
        let mut den = den;
        if g > 1 {
            num /= g;
            den /= g;
        }
        Ok(PhaseFraction { num, den })
    }

    /// Parse "a/b" (or "a") as the multiple of pi.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |s: &str| Error::InvalidParameter(format!("phase must be a rational a/b (times pi), got `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<i64>().map_err(|_| bad(s))?,
                b.trim().parse::<i64>().map_err(|_| bad(s))?,
            ),
            None => (s.trim().parse::<i64>().map_err(|_| bad(s))?, 1),
        };
        if den == 0 {
            return Err(bad(s));
        }
        Self::new(num, den)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    /// The phase in radians.
    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    /// `phi / (2 pi)` as a rotation fraction.
    fn as_rotation(&self) -> Rotation {
        Rotation::from_i128(self.num as i128, 2 * self.den as i128)
    }

    /// The phase shifted by pi (used by the sign-symmetry tests).
    pub fn plus_pi(&self) -> Self {
        Self::new(self.num + self.den, self.den).expect("den stays positive")
    }
}

impl fmt::Display for PhaseFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Exact sign (and float value) of `Re(zeta^nu e^{-i phi})`.
///
/// The zero case is decided rationally: the real part vanishes iff
/// `arg(zeta^nu) - phi = pi/2 mod pi`, i.e. iff the combined rotation
/// fraction is 1/4 or 3/4.
pub fn rotation_phase_sign(zeta: Rotation, nu: u32, phi: PhaseFraction) -> (i32, f64) {
    let combined = zeta.pow(nu as i64).mul(phi.as_rotation().conj());
    (combined.re_sign(), combined.re_f64())
}

struct Component {
    part: u64,
    order: u64,
    dlog: Vec<u32>, // dlog[a mod part] for units; u32::MAX elsewhere
}

impl Component {
    fn mod_four() -> Component {
        Component {
            part: 4,
            order: 2,
            dlog: vec![u32::MAX, 0, u32::MAX, 1],
        }
    }

    fn odd_prime(p: u64) -> Component {
        let g = primitive_root(p);
        let mut dlog = vec![u32::MAX; p as usize];
        let mut pow = 1u64;
        for i in 0..p - 1 {
            dlog[pow as usize] = i as u32;
            pow = pow * g % p;
        }
        Component {
            part: p,
            order: p - 1,
            dlog,
        }
    }
}

fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'outer: for g in 2..p {
        for &q in &factors {
            if mod_pow(g, phi / q, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every odd prime has a primitive root")
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut bb = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// A Dirichlet character modulo 4N, stored by CRT exponents with a
/// materialized value table (the per-prime evaluation is the hot loop).
///
/// Components are ordered [mod 4, then the odd primes of N ascending]; the
/// character sends the component generator `g_i` to `e^{2 pi i e_i/ord_i}`.
/// The generator of the odd component mod p is the smallest primitive root.
#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    component_orders: Vec<u64>,
    exponents: Vec<u64>,
    order: u64,
    values: Vec<Option<Rotation>>,
}

impl DirichletCharacter {
    /// Build the character with the given component exponents.
    pub fn new(modulus: u64, exponents: &[u64]) -> Result<Self> {
        let components = character_components(modulus)?;
        if exponents.len() != components.len() {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus} has {} cyclic components, got {} exponents",
                components.len(),
                exponents.len()
            )));
        }
        for (e, c) in exponents.iter().zip(&components) {
            if *e >= c.order {
                return Err(Error::InvalidParameter(format!(
                    "exponent {e} out of range for component of order {}",
                    c.order
                )));
            }
        }
        let order = exponents
            .iter()
            .zip(&components)
            .map(|(&e, c)| c.order / e.gcd(&c.order))
            .fold(1u64, |acc, o| acc.lcm(&o));

        let mut values = Vec::with_capacity(modulus as usize);
        for a in 0..modulus {
            if a.gcd(&modulus) != 1 {
                values.push(None);
                continue;
            }
            let mut rot = Rotation::one();
            for (c, &e) in components.iter().zip(exponents) {
                let l = c.dlog[(a % c.part) as usize] as i64;
                rot = rot.mul(Rotation::new(e as i64 * l, c.order as i64));
            }
            values.push(Some(rot));
        }
        Ok(DirichletCharacter {
            modulus,
            component_orders: components.iter().map(|c| c.order).collect(),
            exponents: exponents.to_vec(),
            order,
            values,
        })
    }

    /// All phi(4N) characters, in the deterministic mixed-radix order:
    /// index = e_0 + ord_0 (e_1 + ord_1 (e_2 + ...)).
    pub fn enumerate(modulus: u64) -> Result<Vec<Self>> {
        let components = character_components(modulus)?;
        let orders: Vec<u64> = components.iter().map(|c| c.order).collect();
        let total: u64 = orders.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            out.push(Self::from_index(modulus, idx)?);
        }
        Ok(out)
    }

    /// The character at a mixed-radix index in the enumeration.
    pub fn from_index(modulus: u64, index: u64) -> Result<Self> {
        let components = character_components(modulus)?;
        let total: u64 = components.iter().map(|c| c.order).product();
        if index >= total {
            return Err(Error::InvalidParameter(format!(
                "character index {index} out of range (modulus {modulus} has {total} characters)"
            )));
        }
        let mut exps = Vec::with_capacity(components.len());
        let mut rest = index;
        for c in &components {
            exps.push(rest % c.order);
            rest /= c.order;
        }
        Self::new(modulus, &exps)
    }

    /// Position in the deterministic enumeration.
    pub fn index(&self) -> u64 {
        let mut idx = 0u64;
        for (&e, &o) in self.exponents.iter().zip(&self.component_orders).rev() {
            idx = idx * o + e;
        }
        idx
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// N, the odd square-free part: modulus / 4.
    pub fn level_n(&self) -> u64 {
        self.modulus / 4
    }

    /// r_chi, the multiplicative order.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Real characters (order <= 2) support the exact integer lift path.
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// chi(a); None encodes the value 0 at non-units.
    pub fn eval(&self, a: u64) -> Option<Rotation> {
        self.values[(a % self.modulus) as usize]
    }

    /// The image: exactly the r_chi-th roots of unity, ascending fractions.
    pub fn image(&self) -> Vec<Rotation> {
        (0..self.order)
            .map(|j| Rotation::new(j as i64, self.order as i64))
            .collect()
    }

    /// #ker(chi); equals phi(4N)/r_chi.
    pub fn kernel_size(&self) -> u64 {
        self.values
            .iter()
            .filter(|v| matches!(v, Some(r) if r.is_one()))
            .count() as u64
    }

    pub fn unit_count(&self) -> u64 {
        self.values.iter().filter(|v| v.is_some()).count() as u64
    }

    /// Primes `p <= limit` with `chi(p) = zeta` (so `p` coprime to 4N).
    /// A `zeta` outside the image yields an empty fiber with the flag set.
    pub fn fiber(&self, zeta: Rotation, primes: &PrimeSet) -> Fiber {
        let in_image = self.order % zeta.order() as u64 == 0;
        let matching = if in_image {
            primes
                .primes()
                .iter()
                .copied()
                .filter(|&p| self.eval(p) == Some(zeta))
                .collect()
        } else {
            Vec::new()
        };
        Fiber {
            zeta,
            primes: matching,
            in_image,
        }
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DirichletCharacter(mod {}, exponents {:?}, order {})",
            self.modulus, self.exponents, self.order
        )
    }
}

/// Cyclic decomposition (Z/4N)* = (Z/4)* x prod (Z/p)*.
fn character_components(modulus: u64) -> Result<Vec<Component>> {
    if modulus % 4 != 0 {
        return Err(Error::BadModulus(modulus));
    }
    let n = modulus / 4;
    if n % 2 == 0 || !is_square_free(n as i64) {
        return Err(Error::BadModulus(modulus));
    }
    let mut comps = vec![Component::mod_four()];
    let mut m = n;
    let mut p = 3u64;
    while p * p <= m {
        if m % p == 0 {
            comps.push(Component::odd_prime(p));
            m /= p;
        } else {
            p += 2;
        }
    }
    if m > 1 {
        comps.push(Component::odd_prime(m));
    }
    Ok(comps)
}

/// A character fiber: the primes mapping to one root of unity.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub zeta: Rotation,
    pub primes: Vec<u64>,
    /// False when the requested zeta is not in Im(chi); the fiber is then
    /// empty by definition and callers should surface a warning.
    pub in_image: bool,
}

/// The twisted character `chi_{t,N}(d) = chi(d) * kronecker((-1)^k N^2 t, d)`
/// together with its quadratic part `chi_0`.
pub struct TwistedCharacter {
    base: DirichletCharacter,
    kron_top: i64,
}

impl TwistedCharacter {
    pub fn new(base: DirichletCharacter, k: u32, t: i64) -> Result<Self> {
        if t == 0 || !is_square_free(t) {
            return Err(Error::InvalidParameter(format!(
                "t must be a nonzero square-free integer, got {t}"
            )));
        }
        let n = base.level_n() as i64;
        let top = n
            .checked_mul(n)
            .and_then(|n2| n2.checked_mul(t))
            .ok_or_else(|| Error::InvalidParameter("N^2 t overflows".into()))?;
        let kron_top = if k % 2 == 0 { top } else { -top };
        Ok(TwistedCharacter { base, kron_top })
    }

    pub fn base(&self) -> &DirichletCharacter {
        &self.base
    }

    /// `chi_0(d) = kronecker((-1)^k N^2 t, d)`.
    pub fn chi0(&self, d: u64) -> i32 {
        kronecker(self.kron_top, d as i64)
    }

    /// `chi_{t,N}(d)`; None encodes 0 (either factor vanishing).
    pub fn eval(&self, d: u64) -> Option<Rotation> {
        let chi = self.base.eval(d)?;
        match self.chi0(d) {
            0 => None,
            1 => Some(chi),
            _ => Some(chi.mul(Rotation::minus_one())),
        }
    }

    /// Exact integer value for real characters; the lift's integer path
    /// refuses complex characters rather than rounding them.
    pub fn eval_int(&self, d: u64) -> Result<i64> {
        match self.eval(d) {
            None => Ok(0),
            Some(rot) => rot.real_value().ok_or(Error::ComplexCharacter {
                order: self.base.order(),
            }),
        }
    }
}
