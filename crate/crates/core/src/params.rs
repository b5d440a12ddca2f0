//! Stable laws in the common parametrizations and the exact maps between them.
//!
//! Every convention is stored in the same four slots of [`StableParams`]. The
//! slot `gamma` always carries a positive scale-like quantity; the meaning of
//! the others depends on the convention:
//!
//! | convention       | `beta`  | `gamma` | `delta`      |
//! |------------------|---------|---------|--------------|
//! | `S1`             | β       | γ       | δ (= δ₁)     |
//! | `S0`             | β       | γ       | δ₀           |
//! | `Mu1`            | β       | γ       | μ₁           |
//! | `ZolA`           | β       | λ_A     | γ_A          |
//! | `ZolM`           | β       | λ_M     | γ_M          |
//! | `ZolB`           | β_B     | λ_B     | γ_B          |
//! | `ZolCStrict`     | θ       | λ_C     | 0            |
//! | `FellerStrict`   | γ̃       | a       | 0            |
//! | `StrictKl`       | λ       | κ       | 0            |
//! | `OneStableKlb`   | b       | κ       | λ            |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{cos_half_pi, sin_pi, tan_half_pi, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    S1,
    S0,
    Mu1,
    ZolA,
    ZolM,
    ZolB,
    ZolCStrict,
    FellerStrict,
    StrictKl,
    OneStableKlb,
}

impl Convention {
    pub const ALL: [Convention; 10] = [
        Convention::S1,
        Convention::S0,
        Convention::Mu1,
        Convention::ZolA,
        Convention::ZolM,
        Convention::ZolB,
        Convention::ZolCStrict,
        Convention::FellerStrict,
        Convention::StrictKl,
        Convention::OneStableKlb,
    ];

    /// Conventions that can only describe strictly stable laws.
    pub fn is_strict_form(self) -> bool {
        matches!(self, Convention::ZolCStrict | Convention::FellerStrict | Convention::StrictKl)
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::S1 => "s1",
            Convention::S0 => "s0",
            Convention::Mu1 => "mu1",
            Convention::ZolA => "zol-a",
            Convention::ZolM => "zol-m",
            Convention::ZolB => "zol-b",
            Convention::ZolCStrict => "zol-c",
            Convention::FellerStrict => "feller",
            Convention::StrictKl => "strict-kl",
            Convention::OneStableKlb => "one-stable-klb",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let found = match key.as_str() {
            "s1" => Convention::S1,
            "s0" => Convention::S0,
            "mu1" => Convention::Mu1,
            "zol-a" => Convention::ZolA,
            "zol-m" => Convention::ZolM,
            "zol-b" => Convention::ZolB,
            "zol-c" | "zol-c-strict" => Convention::ZolCStrict,
            "feller" | "feller-strict" => Convention::FellerStrict,
            "strict-kl" | "kl" => Convention::StrictKl,
            "one-stable-klb" | "klb" => Convention::OneStableKlb,
            _ => return Err(Error::InvalidParameter(format!("unknown convention '{s}'"))),
        };
        Ok(found)
    }
}

/// An α-stable law tagged with the convention its slots are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    pub convention: Convention,
}

/// Closed or half-open interval, infinite ends allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Support<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> Support<T> {
    pub fn contains(&self, x: T) -> bool {
        x >= self.lower && x <= self.upper
    }

    pub fn is_whole_line(&self) -> bool {
        self.lower == T::neg_infinity() && self.upper == T::infinity()
    }
}

// Slack allowed on bounded slots before a value counts as out of range.
fn slack<T: Real>() -> T {
    T::c(1e-12).max(T::tol_floor())
}

fn clamp_within<T: Real>(name: &str, v: T, bound: T) -> Result<T> {
    if v.abs() <= bound {
        Ok(v)
    } else if v.abs() <= bound + slack::<T>() * (T::one() + bound) {
        Ok(v.signum() * bound)
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} outside [-{bound}, {bound}]")))
    }
}

fn k_of<T: Real>(alpha: T) -> T {
    if alpha < T::one() {
        alpha
    } else {
        alpha - T::c(2.0)
    }
}

impl<T: Real> StableParams<T> {
    /// Validated constructor for any convention.
    pub fn new(convention: Convention, alpha: T, beta: T, gamma: T, delta: T) -> Result<Self> {
        let two = T::c(2.0);
        if !(alpha > T::zero() && alpha <= two) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, 2]")));
        }
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("scale = {gamma} must be positive")));
        }
        if !beta.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        let one = T::one();
        let mut p = StableParams { alpha, beta, gamma, delta, convention };
        match convention {
            Convention::S1 | Convention::S0 | Convention::Mu1 | Convention::ZolA | Convention::ZolM | Convention::ZolB => {
                p.beta = clamp_within("beta", beta, one)?;
                if alpha == two {
                    p.beta = T::zero();
                }
            }
            Convention::ZolCStrict => {
                let bound = if alpha <= one { one } else { two / alpha - one };
                p.beta = clamp_within("theta", beta, bound)?;
                if alpha == one && p.beta.abs() == one {
                    return Err(Error::DegenerateTheta);
                }
                p.delta = T::zero();
            }
            Convention::FellerStrict => {
                if alpha == one {
                    if beta.abs() >= one {
                        return Err(Error::InvalidParameter(format!("tgamma = {beta} needs |tgamma| < 1 at alpha = 1")));
                    }
                } else {
                    let bound = if alpha < one { alpha } else { two - alpha };
                    p.beta = clamp_within("tgamma", beta, bound)?;
                }
                p.delta = T::zero();
            }
            Convention::StrictKl => {
                if alpha == two {
                    p.beta = clamp_within("lambda", beta, T::zero())?;
                } else if alpha != one {
                    p.beta = clamp_within("lambda", beta, gamma * tan_half_pi(alpha).abs())?;
                }
                p.delta = T::zero();
            }
            Convention::OneStableKlb => {
                if alpha != one {
                    return Err(Error::AlphaMismatch(alpha.to_f64_lossy()));
                }
                p.beta = clamp_within("b", beta, two * gamma / T::PI())?;
            }
        }
        Ok(p)
    }

    /// S(α, γ, β, δ) in the S1 convention.
    pub fn s1(alpha: T, beta: T, gamma: T, delta: T) -> Result<Self> {
        Self::new(Convention::S1, alpha, beta, gamma, delta)
    }

    pub fn to_s1(&self) -> Result<Self> {
        to_s1(self)
    }
}

/// Convert `p` to the `target` convention. All maps are closed forms.
pub fn convert<T: Real>(p: &StableParams<T>, target: Convention) -> Result<StableParams<T>> {
    if p.convention == target {
        return Ok(*p);
    }
    if p.convention.is_strict_form() && target.is_strict_form() {
        let kl = to_kl(p)?;
        return from_kl(&kl, target);
    }
    let s1 = to_s1(p)?;
    from_s1(&s1, target)
}

fn to_s1<T: Real>(p: &StableParams<T>) -> Result<StableParams<T>> {
    let one = T::one();
    let two = T::c(2.0);
    let (a, b, g, d) = (p.alpha, p.beta, p.gamma, p.delta);
    let is_one = a == one;
    let t = tan_half_pi(a);
    let out = match p.convention {
        Convention::S1 => return Ok(*p),
        Convention::S0 => {
            let d1 = if is_one { d - two / T::PI() * b * g * g.ln() } else { d - b * g * t };
            (b, g, d1)
        }
        Convention::Mu1 => {
            let d1 = if is_one { d } else { d - b * g.powf(a) * t };
            (b, g, d1)
        }
        Convention::ZolA => (b, g.powf(a.recip()), d * g),
        Convention::ZolM => {
            let ga = if is_one { d } else { d - b * t };
            (b, g.powf(a.recip()), ga * g)
        }
        Convention::ZolB => {
            if is_one {
                let gamma = T::FRAC_PI_2() * g;
                (b, gamma, two * gamma * d / T::PI())
            } else {
                let k = k_of(a);
                let (beta, c) = if k == T::zero() {
                    (T::zero(), one)
                } else {
                    let arg = b * T::FRAC_PI_2() * k;
                    ((arg.tan() / t).max(-one).min(one), arg.cos())
                };
                let lambda_a = g * c;
                let gamma_a = d / c;
                (beta, lambda_a.powf(a.recip()), gamma_a * lambda_a)
            }
        }
        Convention::StrictKl | Convention::ZolCStrict | Convention::FellerStrict => {
            let kl = to_kl(p)?;
            let (kappa, lambda) = (kl.gamma, kl.beta);
            if is_one {
                (T::zero(), kappa, lambda)
            } else if a == two {
                (T::zero(), kappa.sqrt(), T::zero())
            } else {
                ((lambda / (kappa * t)).max(-one).min(one), kappa.powf(a.recip()), T::zero())
            }
        }
        Convention::OneStableKlb => {
            let beta = (T::FRAC_PI_2() * b / g).max(-one).min(one);
            (beta, g, d)
        }
    };
    StableParams::new(Convention::S1, a, out.0, out.1, out.2)
}

fn strict_tolerance<T: Real>(s1: &StableParams<T>) -> T {
    let t = if s1.alpha == T::one() { T::zero() } else { tan_half_pi(s1.alpha).abs() };
    T::tol_floor() * (s1.gamma + s1.gamma.powf(s1.alpha)) * (T::one() + t)
}

/// S1 → STRICT_KL, tolerating rounding-level residues of δ (or β at α = 1).
fn s1_to_kl<T: Real>(s1: &StableParams<T>) -> Result<StableParams<T>> {
    let (a, b, g, d) = (s1.alpha, s1.beta, s1.gamma, s1.delta);
    if a == T::one() {
        if b.abs() > T::tol_floor() {
            return Err(Error::NotStrictlyStable);
        }
        return StableParams::new(Convention::StrictKl, a, d, g, T::zero());
    }
    if d.abs() > strict_tolerance(s1) {
        return Err(Error::NotStrictlyStable);
    }
    let kappa = g.powf(a);
    StableParams::new(Convention::StrictKl, a, b * kappa * tan_half_pi(a), kappa, T::zero())
}

fn to_kl<T: Real>(p: &StableParams<T>) -> Result<StableParams<T>> {
    let a = p.alpha;
    match p.convention {
        Convention::StrictKl => Ok(*p),
        Convention::ZolCStrict => {
            let phase = a * p.beta;
            StableParams::new(
                Convention::StrictKl,
                a,
                p.gamma * sin_pi(phase / T::c(2.0)),
                p.gamma * cos_half_pi(phase),
                T::zero(),
            )
        }
        Convention::FellerStrict => StableParams::new(
            Convention::StrictKl,
            a,
            -p.gamma * sin_pi(p.beta / T::c(2.0)),
            p.gamma * cos_half_pi(p.beta),
            T::zero(),
        ),
        _ => s1_to_kl(&to_s1(p)?),
    }
}

fn from_kl<T: Real>(kl: &StableParams<T>, target: Convention) -> Result<StableParams<T>> {
    let a = kl.alpha;
    let (kappa, lambda) = (kl.gamma, kl.beta);
    match target {
        Convention::StrictKl => Ok(*kl),
        Convention::ZolCStrict => {
            let theta = T::c(2.0) / (T::PI() * a) * lambda.atan2(kappa);
            StableParams::new(target, a, theta, kappa.hypot(lambda), T::zero())
        }
        Convention::FellerStrict => {
            let tg = -T::c(2.0) / T::PI() * lambda.atan2(kappa);
            StableParams::new(target, a, tg, kappa.hypot(lambda), T::zero())
        }
        _ => unreachable!("from_kl called with a non-strict target"),
    }
}

fn from_s1<T: Real>(s1: &StableParams<T>, target: Convention) -> Result<StableParams<T>> {
    let one = T::one();
    let two = T::c(2.0);
    let (a, b, g, d) = (s1.alpha, s1.beta, s1.gamma, s1.delta);
    let is_one = a == one;
    let t = tan_half_pi(a);
    match target {
        Convention::S1 => Ok(*s1),
        Convention::S0 => {
            let d0 = if is_one { d + two / T::PI() * b * g * g.ln() } else { d + b * g * t };
            StableParams::new(target, a, b, g, d0)
        }
        Convention::Mu1 => {
            let mu = if is_one { d } else { d + b * g.powf(a) * t };
            StableParams::new(target, a, b, g, mu)
        }
        Convention::ZolA => {
            let lam = g.powf(a);
            StableParams::new(target, a, b, lam, d / lam)
        }
        Convention::ZolM => {
            let lam = g.powf(a);
            let gm = if is_one { d / lam } else { d / lam + b * t };
            StableParams::new(target, a, b, lam, gm)
        }
        Convention::ZolB => {
            if is_one {
                StableParams::new(target, a, b, two * g / T::PI(), T::PI() * d / (two * g))
            } else {
                let lam_a = g.powf(a);
                let gam_a = d / lam_a;
                let k = k_of(a);
                if k == T::zero() {
                    return StableParams::new(target, a, T::zero(), lam_a, gam_a);
                }
                let bb = two / (T::PI() * k) * (b * t).atan();
                let c = (bb * T::FRAC_PI_2() * k).cos();
                StableParams::new(target, a, bb.max(-one).min(one), lam_a / c, gam_a * c)
            }
        }
        Convention::StrictKl | Convention::ZolCStrict | Convention::FellerStrict => {
            let kl = s1_to_kl(s1)?;
            from_kl(&kl, target)
        }
        Convention::OneStableKlb => {
            if !is_one {
                return Err(Error::AlphaMismatch(a.to_f64_lossy()));
            }
            StableParams::new(target, a, two / T::PI() * b * g, g, d)
        }
    }
}

/// Characteristic function φ(t) = E e^{itX}.
pub fn cf<T: Real>(p: &StableParams<T>, t: T) -> Complex<T> {
    if t == T::zero() {
        return Complex::new(T::one(), T::zero());
    }
    let v = cf_positive(p, t.abs());
    if t < T::zero() {
        v.conj()
    } else {
        v
    }
}

fn cf_positive<T: Real>(p: &StableParams<T>, t: T) -> Complex<T> {
    let a = p.alpha;
    if p.convention.is_strict_form() {
        if let Ok(kl) = to_kl(p) {
            // exp(-(κ - iλ)t^α)
            let ta = t.powf(a);
            return Complex::new(-kl.gamma * ta, kl.beta * ta).exp();
        }
    }
    let s = match to_s1(p) {
        Ok(s) => s,
        Err(_) => return Complex::new(T::nan(), T::nan()),
    };
    let (b, g, d) = (s.beta, s.gamma, s.delta);
    if a == T::one() {
        let re = -g * t;
        let im = -g * t * b * T::FRAC_2_PI() * t.ln() + d * t;
        Complex::new(re, im).exp()
    } else {
        let sa = (g * t).powf(a);
        let im = if a == T::c(2.0) { T::zero() } else { sa * b * tan_half_pi(a) };
        Complex::new(-sa, im + d * t).exp()
    }
}

/// Laplace transform E e^{-tX} for Re t ≥ 0 (spectrally positive laws and the normal).
pub fn laplace<T: Real>(p: &StableParams<T>, t: Complex<T>) -> Result<Complex<T>> {
    if t.re < T::zero() {
        return Err(Error::RangeError("Laplace transform needs Re t >= 0".into()));
    }
    let s = to_s1(p)?;
    let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
    let two = T::c(2.0);
    if a < two && (b - T::one()).abs() > T::tol_floor() {
        return Err(Error::NotSpectrallyPositive);
    }
    if t.re == T::zero() && t.im == T::zero() {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let expo = if a == two {
        t * t * (g * g)
    } else if a == T::one() {
        t * t.ln() * (T::FRAC_2_PI() * g)
    } else {
        t.powf(a) * (-g.powf(a) / cos_half_pi(a))
    };
    Ok((expo - t * d).exp())
}

/// Parameters of aX + d, returned in S1.
pub fn scale_shift<T: Real>(p: &StableParams<T>, a: T, d: T) -> Result<StableParams<T>> {
    if !(a > T::zero()) {
        return Err(Error::NonpositiveScale(a.to_f64_lossy()));
    }
    let s = to_s1(p)?;
    let mut loc = a * s.delta + d;
    if s.alpha == T::one() {
        loc = loc - T::FRAC_2_PI() * s.beta * s.gamma * a * a.ln();
    }
    StableParams::s1(s.alpha, s.beta, a * s.gamma, loc)
}

/// Law of -X, in the convention of `p`.
pub fn negate<T: Real>(p: &StableParams<T>) -> Result<StableParams<T>> {
    let s = to_s1(p)?;
    let neg = StableParams::s1(s.alpha, -s.beta, s.gamma, -s.delta)?;
    convert(&neg, p.convention)
}

/// Norming (a_n, b_n) with X₁ + … + X_n equal in law to a_n X + b_n.
pub fn iid_sum_law<T: Real>(p: &StableParams<T>, n: u64) -> Result<(T, T)> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let s = to_s1(p)?;
    let nn = T::from_u64(n).expect("count representable");
    if s.alpha == T::one() {
        Ok((nn, T::FRAC_2_PI() * s.beta * s.gamma * nn * nn.ln()))
    } else {
        let an = nn.powf(s.alpha.recip());
        Ok((an, (nn - an) * s.delta))
    }
}

pub fn is_strictly_stable<T: Real>(p: &StableParams<T>) -> bool {
    if p.convention.is_strict_form() {
        return true;
    }
    match to_s1(p) {
        Ok(s) if s.alpha == T::one() => s.beta == T::zero(),
        Ok(s) => s.delta == T::zero(),
        Err(_) => false,
    }
}

pub fn is_spectrally_positive<T: Real>(p: &StableParams<T>) -> bool {
    match to_s1(p) {
        Ok(s) => s.beta == T::one() && s.alpha < T::c(2.0),
        Err(_) => false,
    }
}

/// Support is a subset of [0, ∞).
pub fn is_positive<T: Real>(p: &StableParams<T>) -> bool {
    match to_s1(p) {
        Ok(s) => s.alpha < T::one() && s.beta == T::one() && s.delta >= T::zero(),
        Err(_) => false,
    }
}

pub fn support<T: Real>(p: &StableParams<T>) -> Result<Support<T>> {
    let s = to_s1(p)?;
    let whole = Support { lower: T::neg_infinity(), upper: T::infinity() };
    if s.alpha < T::one() {
        if s.beta == T::one() {
            return Ok(Support { lower: s.delta, upper: T::infinity() });
        }
        if s.beta == -T::one() {
            return Ok(Support { lower: T::neg_infinity(), upper: s.delta });
        }
    }
    Ok(whole)
}
