//! Densities and distribution functions of stable laws.
//!
//! Strict laws in Feller's form exp(−a e^{iπγ̃ sgn(t)/2}|t|^α) have density
//! a^{−1/α} p(a^{−1/α}x; α, γ̃), where p is given by two convergent series.
//! Everything else, and every CDF, goes through Fourier inversion.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{support, StableParams};
use crate::quad::{integrate_from_zero, oscillatory_tail, Tolerance};
use crate::real::{cos_half_pi, sin_pi, tan_half_pi, Real};
use crate::special::{gamma, ln_gamma};

const MAX_TERMS: usize = 400;
const SERIES_TOLERANCE: f64 = 1e-10;
const INVERSION_TRUNCATION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    SeriesSmallAlpha,
    SeriesLargeAlpha,
    AtZero,
    Inversion,
}

/// Density value with the method that produced it and an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult<T> {
    pub value: T,
    pub terms_used: usize,
    pub truncation_bound: T,
    pub method: Method,
}

/// A law centred at its location, written for t > 0 as
/// log φ₀(t) = −κt^α + iλt^α − i b t log t.
#[derive(Debug, Clone, Copy)]
struct Centred<T> {
    alpha: T,
    kappa: T,
    lambda: T,
    b: T,
}

impl<T: Real> Centred<T> {
    fn feller(alpha: T, tgamma: T) -> Self {
        Centred { alpha, kappa: cos_half_pi(tgamma), lambda: -sin_pi(tgamma / T::c(2.0)), b: T::zero() }
    }

    /// Returns the centred law and its location.
    fn from_params(p: &StableParams<T>) -> Result<(Self, T)> {
        let s = p.to_s1()?;
        let (a, beta, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
        let c = if a == T::one() {
            Centred { alpha: a, kappa: g, lambda: T::zero(), b: T::FRAC_2_PI() * beta * g }
        } else if a == T::c(2.0) {
            Centred { alpha: a, kappa: g * g, lambda: T::zero(), b: T::zero() }
        } else {
            let kappa = g.powf(a);
            Centred { alpha: a, kappa, lambda: beta * kappa * tan_half_pi(a), b: T::zero() }
        };
        Ok((c, d))
    }

    /// φ₀(t) e^{−itx}, split as decay × unit phasor.
    fn integrand(&self, t: T, x: T) -> (T, T) {
        let ta = t.powf(self.alpha);
        let mut phase = self.lambda * ta - t * x;
        if self.b != T::zero() && t > T::zero() {
            phase = phase - self.b * t * t.ln();
        }
        ((-self.kappa * ta).exp(), phase)
    }

    /// Cutoff T with ∫_T^∞ e^{−κt^α}dt·max(1, 1/T) ≤ tol.
    fn cutoff(&self, tol: T) -> T {
        let s = self.alpha.recip();
        let mut y = s + T::one();
        for _ in 0..200 {
            let ratio = (s - T::one()) / y;
            let factor = if ratio > T::zero() { (T::one() - ratio).recip() } else { T::one() };
            let bound = y.powf(s - T::one()) * (-y).exp() * factor * s * self.kappa.powf(-s);
            let t = (y / self.kappa).powf(s);
            if bound * T::one().max(t.recip()) <= tol {
                return t;
            }
            y = y * T::c(1.25);
        }
        (y / self.kappa).powf(s)
    }

    fn invert(&self, x: T, cumulative: bool) -> (T, T) {
        let tol = Tolerance::new(T::c(1e-12).max(T::tol_floor()), T::c(1e-11).max(T::tol_floor()));
        let cut = self.cutoff(T::c(INVERSION_TRUNCATION) * T::PI());
        let split = if x == T::zero() { cut } else { cut.min(T::PI() / x.abs()) };
        let pick = |t: T, v: Complex<T>| if cumulative { Complex::new(v.im / t, T::zero()) } else { Complex::new(v.re, T::zero()) };
        let near = integrate_from_zero(
            |t| {
                let (m, ph) = self.integrand(t, x);
                pick(t, Complex::from_polar(m, ph))
            },
            split,
            tol,
        );
        let mut value = near.value.re;
        let mut error = near.error;
        if split < cut {
            // Amplitude without the e^{−itx} carrier, which the panel routine supplies.
            let far = oscillatory_tail(
                |t| {
                    let (m, ph) = self.integrand(t, T::zero());
                    let v = Complex::from_polar(m, ph);
                    if cumulative {
                        v / t
                    } else {
                        v
                    }
                },
                split,
                -x,
                tol,
                Some(cut),
            );
            value = value + if cumulative { far.value.im } else { far.value.re };
            error = error + far.error;
        }
        error = error + T::c(INVERSION_TRUNCATION) * T::PI();
        if cumulative {
            (T::c(0.5) - value / T::PI(), error / T::PI())
        } else {
            (value / T::PI(), error / T::PI())
        }
    }
}

fn check_tgamma<T: Real>(alpha: T, tgamma: T) -> Result<T> {
    let bound = if alpha < T::one() { alpha } else { T::c(2.0) - alpha };
    let slack = T::c(1e-12) * (T::one() + bound);
    if !(tgamma.abs() <= bound + slack) {
        return Err(Error::RangeError(format!("tgamma = {tgamma} outside [-{bound}, {bound}]")));
    }
    Ok(tgamma.max(-bound).min(bound))
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha < T::c(2.0)) || alpha == T::one() {
        return Err(Error::RangeError(format!("alpha = {alpha} must lie in (0, 2) and differ from 1")));
    }
    Ok(())
}

/// p(0; α, γ̃) = Γ(1+1/α) sin(π(α−γ̃)/(2α))/π.
fn at_zero_unchecked<T: Real>(alpha: T, tgamma: T) -> T {
    gamma(T::one() + alpha.recip()) * sin_pi((alpha - tgamma) / (T::c(2.0) * alpha)) / T::PI()
}

/// Density of Feller's standard form at 0, for 1 < α < 2.
pub fn p_at_zero<T: Real>(alpha: T, tgamma: T) -> Result<T> {
    if !(alpha > T::one() && alpha < T::c(2.0)) {
        return Err(Error::RangeError(format!("alpha = {alpha} outside (1, 2)")));
    }
    let tg = check_tgamma(alpha, tgamma)?;
    Ok(at_zero_unchecked(alpha, tg))
}

struct SeriesSum<T> {
    value: T,
    bound: T,
    terms: usize,
    converged: bool,
}

/// Σ_{k≥1} (−1)^k e^{L(k)} sin(πkω) / (πx), with L(k) the log envelope.
fn alternating_series<T: Real, L>(x: T, omega: T, log_env: L) -> SeriesSum<T>
where
    L: Fn(usize) -> T,
{
    let scale = (T::PI() * x).recip();
    let mut sum = T::zero();
    let mut sum_abs = T::zero();
    let mut prev_ratio = T::infinity();
    let mut cur = log_env(1);
    for k in 1..=MAX_TERMS {
        let env = cur.exp();
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let term = sign * env * sin_pi(T::from_count(k) * omega);
        sum = sum + term;
        sum_abs = sum_abs + term.abs();
        let next = log_env(k + 1);
        let ratio = (next - cur).exp();
        let rounding = T::c(10.0) * T::epsilon() * sum_abs * scale;
        if !rounding.is_finite() || rounding > T::c(SERIES_TOLERANCE) {
            return SeriesSum { value: sum * scale, bound: rounding, terms: k, converged: false };
        }
        if ratio < T::one() && ratio <= prev_ratio {
            let tail = next.exp() / (T::one() - ratio) * scale;
            if tail <= T::c(1e-16) * (sum * scale).abs() || tail <= T::c(1e-20) {
                return SeriesSum { value: sum * scale, bound: tail + rounding, terms: k, converged: true };
            }
        }
        prev_ratio = ratio;
        cur = next;
    }
    SeriesSum { value: sum * scale, bound: T::infinity(), terms: MAX_TERMS, converged: false }
}

fn inversion_result<T: Real>(c: &Centred<T>, x: T) -> Result<SeriesResult<T>> {
    let (value, err) = c.invert(x, false);
    if !value.is_finite() || err > T::c(1e-6).max(T::accuracy_floor()) {
        return Err(Error::ConvergenceFailure { estimate: err.to_f64_lossy() });
    }
    Ok(SeriesResult { value, terms_used: 0, truncation_bound: err, method: Method::Inversion })
}

/// p(x; α, γ̃) by Feller's series, falling back to inversion when the series
/// cannot certify 1e-10.
pub fn p_feller<T: Real>(x: T, alpha: T, tgamma: T) -> Result<SeriesResult<T>> {
    check_alpha(alpha)?;
    let tg = check_tgamma(alpha, tgamma)?;
    if x < T::zero() {
        return p_feller(-x, alpha, -tg);
    }
    if x == T::zero() {
        // The one-sided laws vanish to all orders at their edge.
        let value = if alpha < T::one() && tg.abs() == alpha { T::zero() } else { at_zero_unchecked(alpha, tg) };
        return Ok(SeriesResult { value, terms_used: 0, truncation_bound: T::zero(), method: Method::AtZero });
    }
    let small = alpha < T::one();
    let omega = if small { (tg - alpha) / T::c(2.0) } else { (tg - alpha) / (T::c(2.0) * alpha) };
    let method = if small { Method::SeriesSmallAlpha } else { Method::SeriesLargeAlpha };
    if omega == omega.round() {
        // Every sine factor vanishes: outside a one-sided support.
        return Ok(SeriesResult { value: T::zero(), terms_used: 0, truncation_bound: T::zero(), method });
    }
    let lx = x.ln();
    let s = if small {
        alternating_series(x, omega, |k| {
            let kk = T::from_count(k);
            ln_gamma(kk * alpha + T::one()) - ln_gamma(kk + T::one()) - kk * alpha * lx
        })
    } else {
        alternating_series(x, omega, |k| {
            let kk = T::from_count(k);
            ln_gamma(T::one() + kk / alpha) - ln_gamma(kk + T::one()) + kk * lx
        })
    };
    if s.converged && s.bound <= T::c(SERIES_TOLERANCE) {
        return Ok(SeriesResult { value: s.value, terms_used: s.terms, truncation_bound: s.bound, method });
    }
    inversion_result(&Centred::feller(alpha, tg), x)
}

/// p(x; α, γ̃) by Fourier inversion only.
pub fn p_feller_inversion<T: Real>(x: T, alpha: T, tgamma: T) -> Result<SeriesResult<T>> {
    check_alpha(alpha)?;
    let tg = check_tgamma(alpha, tgamma)?;
    inversion_result(&Centred::feller(alpha, tg), x)
}

/// Feller's (a, γ̃) for a law given in any convention; requires α ∉ {1, 2}.
pub fn feller_form<T: Real>(p: &StableParams<T>) -> Result<(T, T)> {
    let s = p.to_s1()?;
    let a = s.alpha;
    if a == T::one() || a == T::c(2.0) {
        return Err(Error::RangeError("Feller form needs alpha outside {1, 2}".into()));
    }
    let kappa = s.gamma.powf(a);
    let lambda = s.beta * kappa * tan_half_pi(a);
    Ok((kappa.hypot(lambda), -T::FRAC_2_PI() * lambda.atan2(kappa)))
}

/// Density with the method used and its error bound.
pub fn pdf_detail<T: Real>(p: &StableParams<T>, x: T) -> Result<SeriesResult<T>> {
    let s = p.to_s1()?;
    let zero = SeriesResult { value: T::zero(), terms_used: 0, truncation_bound: T::zero(), method: Method::AtZero };
    if !support(&s)?.contains(x) {
        return Ok(zero);
    }
    let (a, g, d) = (s.alpha, s.gamma, s.delta);
    if a == T::c(2.0) {
        let z = (x - d) / g;
        let value = (-z * z / T::c(4.0)).exp() / (T::c(2.0) * g * T::PI().sqrt());
        return Ok(SeriesResult { value, ..zero });
    }
    if a == T::one() {
        let (c, loc) = Centred::from_params(&s)?;
        return inversion_result(&c, x - loc);
    }
    let (aa, tg) = feller_form(&s)?;
    let scale = aa.powf(-a.recip());
    let r = p_feller(scale * (x - d), a, tg)?;
    Ok(SeriesResult { value: scale * r.value, truncation_bound: scale * r.truncation_bound, ..r })
}

pub fn pdf<T: Real>(p: &StableParams<T>, x: T) -> Result<T> {
    pdf_detail(p, x).map(|r| r.value)
}

/// Density of S(α, γ, 1, 0) at the origin, 1 < α < 2.
pub fn pdf_at_zero_beta1<T: Real>(gamma_: T, alpha: T) -> Result<T> {
    if !(alpha > T::one() && alpha < T::c(2.0)) {
        return Err(Error::RangeError(format!("alpha = {alpha} outside (1, 2)")));
    }
    if !(gamma_ > T::zero()) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma_} must be positive")));
    }
    Ok(cos_half_pi(alpha).abs().powf(alpha.recip()) / (gamma_ * gamma(-alpha.recip()).abs()))
}

/// Density by inversion, for any convention.
pub fn pdf_inversion<T: Real>(p: &StableParams<T>, x: T) -> Result<SeriesResult<T>> {
    let (c, loc) = Centred::from_params(p)?;
    inversion_result(&c, x - loc)
}

/// Distribution function with its error bound.
pub fn cdf_detail<T: Real>(p: &StableParams<T>, x: T) -> Result<(T, T)> {
    let s = p.to_s1()?;
    if x == T::neg_infinity() {
        return Ok((T::zero(), T::zero()));
    }
    if x == T::infinity() {
        return Ok((T::one(), T::zero()));
    }
    let sup = support(&s)?;
    if x < sup.lower {
        return Ok((T::zero(), T::zero()));
    }
    if x >= sup.upper {
        return Ok((T::one(), T::zero()));
    }
    let (c, loc) = Centred::from_params(&s)?;
    let (v, err) = c.invert(x - loc, true);
    if !v.is_finite() || err > T::c(1e-6).max(T::accuracy_floor()) {
        return Err(Error::QuadratureFailure { estimate: err.to_f64_lossy() });
    }
    Ok((v.max(T::zero()).min(T::one()), err))
}

pub fn cdf<T: Real>(p: &StableParams<T>, x: T) -> Result<T> {
    cdf_detail(p, x).map(|r| r.0)
}
