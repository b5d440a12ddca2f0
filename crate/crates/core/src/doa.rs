//! Domains of attraction: limit laws and norming sequences for regularly
//! varying tails, the α = 1 centering machinery, characteristic-function
//! expansions, multiplicative transforms and a catalog of worked examples.
//!
//! Only constant slowly varying parts are handled, plus the logarithmic one
//! that appears on the boundary α = 2.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{is_strictly_stable, scale_shift, StableParams};
use crate::quad::{integrate, integrate_from_zero, oscillatory_tail, Tolerance};
use crate::real::{cos_half_pi, Real};
use crate::special::{gamma, gamma_p, gamma_q, zeta};

/// Tail specification P(X > x) ~ p₊Cx^{−α}, P(X < −x) ~ p₋Cx^{−α}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSpec<T> {
    pub alpha: T,
    #[serde(rename = "C")]
    pub c: T,
    pub p_plus: T,
    /// Set for integer-valued laws with P(X = n) ~ c n^{−α−1}; then C = c/α.
    pub lattice_c: Option<T>,
}

impl<T: Real> TailSpec<T> {
    pub fn new(alpha: T, c: T, p_plus: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::c(2.0)) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, 2)")));
        }
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("C = {c} must be positive")));
        }
        if !(p_plus >= T::zero() && p_plus <= T::one()) {
            return Err(Error::InvalidParameter(format!("p_plus = {p_plus} outside [0, 1]")));
        }
        Ok(TailSpec { alpha, c, p_plus, lattice_c: None })
    }

    /// Positive integer law with P(X = n) ~ c n^{−α−1}.
    pub fn lattice(alpha: T, c: T) -> Result<Self> {
        let mut s = Self::new(alpha, c / alpha, T::one())?;
        s.lattice_c = Some(c);
        Ok(s)
    }

    pub fn p_minus(&self) -> T {
        T::one() - self.p_plus
    }
}

/// Growth of the scaling sequence a_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    PowerInvAlpha,
    SqrtNLogN,
}

/// What is subtracted from S_n/a_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Centering<T> {
    Zero,
    /// n·E X / a_n.
    NMean,
    /// a_n E sin(X/a_n).
    NESin,
    /// log_coeff·log n + constant.
    Explicit { log_coeff: T, constant: T },
}

/// Normalization (S_n − b_n)/a_n, written as S_n/a_n − centering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormingScheme<T> {
    pub alpha: T,
    pub scaling: Scaling,
    pub centering: Centering<T>,
}

impl<T: Real> NormingScheme<T> {
    pub fn a_n(&self, n: T) -> T {
        match self.scaling {
            Scaling::PowerInvAlpha => n.powf(self.alpha.recip()),
            Scaling::SqrtNLogN => (n * n.ln()).sqrt(),
        }
    }

    pub fn describe(&self) -> String {
        let a = match self.scaling {
            Scaling::PowerInvAlpha if self.alpha == T::one() => "n".to_string(),
            Scaling::PowerInvAlpha => format!("n^(1/{})", self.alpha),
            Scaling::SqrtNLogN => "sqrt(n log n)".to_string(),
        };
        let b = match self.centering {
            Centering::Zero => "0".to_string(),
            Centering::NMean => "n·E X".to_string(),
            Centering::NESin => "n·E sin(X/n)".to_string(),
            Centering::Explicit { log_coeff, constant } => format!("{log_coeff}·log n + {constant}"),
        };
        format!("a_n = {a}, b_n = {b}")
    }
}

/// Limit law and norming for a tail specification; the limit has δ = 0.
pub fn limit_params<T: Real>(spec: &TailSpec<T>) -> Result<(StableParams<T>, NormingScheme<T>)> {
    let a = spec.alpha;
    let one = T::one();
    let g = if a == one {
        spec.c * T::FRAC_PI_2()
    } else {
        (spec.c * gamma(one - a) * cos_half_pi(a)).powf(a.recip())
    };
    let beta = spec.p_plus - spec.p_minus();
    let centering = if a < one {
        Centering::Zero
    } else if a > one {
        Centering::NMean
    } else {
        Centering::NESin
    };
    let law = StableParams::s1(a, beta, g, T::zero())?;
    Ok((law, NormingScheme { alpha: a, scaling: Scaling::PowerInvAlpha, centering }))
}

/// E e^{−tZ} of the totally skewed limit law, in closed form.
pub fn limit_laplace_beta1<T: Real>(spec: &TailSpec<T>, t: T) -> Result<T> {
    let a = spec.alpha;
    if a == T::one() {
        return Err(Error::RangeError("alpha = 1 has a logarithmic Laplace exponent".into()));
    }
    if spec.p_plus != T::one() {
        return Err(Error::NotSpectrallyPositive);
    }
    if t < T::zero() {
        return Err(Error::RangeError(format!("t = {t} must be nonnegative")));
    }
    if t == T::zero() {
        return Ok(T::one());
    }
    let expo = match spec.lattice_c {
        Some(c) => c * gamma(-a) * t.powf(a),
        None => -spec.c * gamma(T::one() - a) * t.powf(a),
    };
    Ok(expo.exp())
}

/// Density of the totally skewed limit at the origin, 1 < α < 2.
pub fn density_at_zero_limit<T: Real>(spec: &TailSpec<T>) -> Result<T> {
    let a = spec.alpha;
    if !(a > T::one()) {
        return Err(Error::RangeError(format!("alpha = {a} outside (1, 2)")));
    }
    if spec.p_plus != T::one() {
        return Err(Error::RangeError("needs p_plus = 1".into()));
    }
    let inv = -a.recip();
    Ok(spec.c.powf(inv) * gamma(T::one() - a).abs().powf(inv) / gamma(inv).abs())
}

/// Boundary case α = 2 with P(|X| > x) ~ C x^{−2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alpha2Limit<T> {
    pub a_n: T,
    /// Variance of the normal limit N(0, C).
    pub variance: T,
    /// n μ(a_n)/a_n² with μ(x) = 2C log x; tends to C.
    pub ratio: T,
}

/// Truncated second moment E X²1{|X| ≤ x} ~ 2C log x.
pub fn truncated_second_moment<T: Real>(c: T, x: T) -> T {
    T::c(2.0) * c * x.ln()
}

pub fn alpha2_limit<T: Real>(c: T, n: T) -> Result<Alpha2Limit<T>> {
    if !(c > T::zero()) {
        return Err(Error::InvalidParameter(format!("C = {c} must be positive")));
    }
    if !(n >= T::c(2.0)) {
        return Err(Error::RangeError(format!("n = {n} must be at least 2")));
    }
    let a_n = (n * n.ln()).sqrt();
    let ratio = n * truncated_second_moment(c, a_n) / (a_n * a_n);
    Ok(Alpha2Limit { a_n, variance: c, ratio })
}

/// Coefficients of 1 − φ(t) = (κ − iλ)t^α + i b t log t + o(t^α), t ↓ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfFit<T> {
    pub kappa: T,
    pub lambda: T,
    pub b: Option<T>,
    pub error: T,
}

const FIT_J: std::ops::RangeInclusive<i32> = 8..=20;

fn richardson<T: Real>(seq: &[Complex<T>], p: T) -> Vec<Complex<T>> {
    let r = T::c(2.0).powf(p);
    seq.windows(2).map(|w| (w[1] * r - w[0]) / (r - T::one())).collect()
}

/// Richardson sweeps for the given exponents, then the entry whose
/// neighbour agrees best.
fn extrapolate<T: Real>(seq: &[Complex<T>], exponents: &[T]) -> (Complex<T>, T) {
    let r = exponents.iter().fold(seq.to_vec(), |s, &p| richardson(&s, p));
    let mut best = (r[0], T::infinity());
    for w in r.windows(2) {
        let d = (w[1] - w[0]).norm();
        if d < best.1 {
            best = (w[1], d);
        }
    }
    best
}

/// Estimates the small-t expansion of a characteristic function on t = 2^{−j},
/// j = 8..20. With `with_log` the t log t coefficient is removed first
/// (α = 1 only); otherwise 2 to 5 sweeps at exponents α, 2α, … are tried and
/// the one with the smallest error estimate kept.
pub fn cf_expansion_fit<T: Real, F>(mut cf: F, alpha: T, with_log: bool) -> Result<CfFit<T>>
where
    F: FnMut(T) -> Complex<T>,
{
    if !(alpha > T::zero() && alpha <= T::c(2.0)) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, 2]")));
    }
    if with_log && alpha != T::one() {
        return Err(Error::RangeError("the log term only arises at alpha = 1".into()));
    }
    let ts: Vec<T> = FIT_J.map(|j| T::c(2.0).powi(-j)).collect();
    let g: Vec<Complex<T>> = ts.iter().map(|&t| (Complex::new(T::one(), T::zero()) - cf(t)) / t.powf(alpha)).collect();
    if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::FitDiverged);
    }
    let zero = T::zero();
    // t^α log^k t corrections need repeated sweeps at the same exponent.
    let exponents = vec![alpha, alpha, alpha, alpha + alpha];
    let (g, b, b_err) = if with_log {
        let ln2 = T::LN_2();
        let bs: Vec<Complex<T>> = g.windows(2).map(|w| Complex::new((w[0].im - w[1].im) / ln2, zero)).collect();
        let (b, e) = extrapolate(&bs, &exponents);
        let b = b.re;
        let shifted = g.iter().zip(&ts).map(|(z, &t)| Complex::new(z.re, z.im - b * t.ln())).collect::<Vec<_>>();
        (shifted, Some(b), e)
    } else {
        (g, None, zero)
    };
    let (c, e) = if with_log {
        extrapolate(&g, &exponents)
    } else {
        // Small α leaves t^{3α}, t^{4α}, … terms that two sweeps cannot reach.
        (2..=5)
            .map(|k| extrapolate(&g, &(1..=k).map(|m| alpha * T::from_count(m)).collect::<Vec<_>>()))
            .fold((Complex::new(zero, zero), T::infinity()), |best, cand| if cand.1 < best.1 { cand } else { best })
    };
    let error = e + b_err * T::c(20.0);
    let fit = CfFit { kappa: c.re, lambda: -c.im, b, error };
    let scale = T::one() + c.norm() + b.map_or(zero, |v| v.abs());
    if !error.is_finite() || error > T::c(1e-3) * scale || !(fit.kappa > zero) {
        return Err(Error::FitDiverged);
    }
    Ok(fit)
}

/// Law of Y^{1/α}Z for strictly stable Z and independent Y ≥ 0 with E Y^α = `moment_alpha`.
pub fn mult_transform<T: Real>(z: &StableParams<T>, moment_alpha: T) -> Result<StableParams<T>> {
    if !is_strictly_stable(z) {
        return Err(Error::NotStrictlyStable);
    }
    if !(moment_alpha > T::zero()) || !moment_alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("E Y^alpha = {moment_alpha} must be positive")));
    }
    scale_shift(z, moment_alpha.powf(z.alpha.recip()), T::zero())
}

/// α = 1 products XY: if S_n/n − b_n → Z then Σ X_iY_i/n − bμ log n − μ·(const)
/// converges. Returns the limit S1(μγ, β, μδ − bν) and the new log coefficient bμ.
pub fn mult_transform_alpha1<T: Real>(z: &StableParams<T>, mu: T, nu: T) -> Result<(StableParams<T>, T)> {
    if z.alpha != T::one() {
        return Err(Error::RangeError(format!("alpha = {} must be 1", z.alpha)));
    }
    if !(mu > T::zero()) || !mu.is_finite() || !nu.is_finite() {
        return Err(Error::RangeError(format!("need mu > 0 and finite nu (mu = {mu}, nu = {nu})")));
    }
    let s = z.to_s1()?;
    let b = T::FRAC_2_PI() * s.beta * s.gamma;
    let out = StableParams::s1(T::one(), s.beta, mu * s.gamma, mu * s.delta - b * nu)?;
    Ok((out, b * mu))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExampleName<T> {
    OneOverU,
    OneOverExp,
    UniformRatio,
    ExpRatio,
    VsqOverW { q: T },
    Pareto { alpha: T, #[serde(rename = "C")] c: T },
    IntPower { alpha: T },
}

impl<T: Real> ExampleName<T> {
    pub const NAMES: [&'static str; 7] =
        ["one-over-u", "one-over-exp", "uniform-ratio", "exp-ratio", "vsq-over-w", "pareto", "int-power"];

    /// Parses a catalog name; `q`, `alpha` and `c` fill in the parametric entries.
    pub fn parse(name: &str, q: Option<T>, alpha: Option<T>, c: Option<T>) -> Result<Self> {
        let key = name.to_ascii_lowercase().replace('_', "-");
        let need = |v: Option<T>, what: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("example '{name}' needs {what}")))
        };
        Ok(match key.as_str() {
            "one-over-u" => ExampleName::OneOverU,
            "one-over-exp" => ExampleName::OneOverExp,
            "uniform-ratio" => ExampleName::UniformRatio,
            "exp-ratio" => ExampleName::ExpRatio,
            "vsq-over-w" => ExampleName::VsqOverW { q: q.unwrap_or(T::c(0.5)) },
            "pareto" => ExampleName::Pareto { alpha: need(alpha, "alpha")?, c: c.unwrap_or(T::one()) },
            "int-power" => ExampleName::IntPower { alpha: need(alpha, "alpha")? },
            _ => return Err(Error::UnknownExample(name.to_string())),
        })
    }
}

impl<T: Real> fmt::Display for ExampleName<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleName::OneOverU => f.write_str("one-over-u"),
            ExampleName::OneOverExp => f.write_str("one-over-exp"),
            ExampleName::UniformRatio => f.write_str("uniform-ratio"),
            ExampleName::ExpRatio => f.write_str("exp-ratio"),
            ExampleName::VsqOverW { q } => write!(f, "vsq-over-w(q={q})"),
            ExampleName::Pareto { alpha, c } => write!(f, "pareto(alpha={alpha}, C={c})"),
            ExampleName::IntPower { alpha } => write!(f, "int-power(alpha={alpha})"),
        }
    }
}

/// How a draw is built from uniform and exponential variates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SamplerSpec<T> {
    /// 1/U.
    InverseUniform,
    /// 1/W.
    InverseExponential,
    /// U/U′.
    UniformRatio,
    /// W/W′.
    ExponentialRatio,
    /// V²/W with V uniform on (lo, hi).
    SquareOverExponential { lo: T, hi: T },
    /// x_min·U^{−1/α}.
    ParetoInverseCdf { alpha: T, x_min: T },
    /// P(X = n) = n^{−α−1}/ζ(α+1), by rejection.
    Zeta { alpha: T },
}

/// A worked example: how to sample it, how to normalize its sums and the limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleModel<T> {
    pub name: ExampleName<T>,
    pub sampler_spec: SamplerSpec<T>,
    pub norming: NormingScheme<T>,
    pub limit: StableParams<T>,
    /// E X when finite and needed by the norming.
    pub mean: Option<T>,
}

impl<T: Real> ExampleModel<T> {
    /// Asymptotic n·E sin(X/n) ≈ log_coeff·log n + constant, for α = 1
    /// models with an explicit norming.
    pub fn bn_asymptotic(&self, n: T) -> Option<T> {
        match self.norming.centering {
            Centering::Explicit { log_coeff, constant } => Some(log_coeff * n.ln() + constant + self.limit.delta),
            _ => None,
        }
    }

    /// Density on the positive half-line, when the law has one.
    pub fn density_spec(&self) -> Option<DensitySpec<T>> {
        let one = T::one();
        let half = T::c(0.5);
        let spec = |f: Arc<dyn Fn(T) -> T + Send + Sync>, lower: T, breaks: Vec<T>| DensitySpec {
            density: f,
            lower,
            breaks,
            two_sided: false,
        };
        Some(match self.sampler_spec {
            SamplerSpec::InverseUniform => spec(Arc::new(|x: T| (x * x).recip()), one, vec![]),
            SamplerSpec::InverseExponential => {
                spec(Arc::new(|x: T| (-x.recip()).exp() / (x * x)), T::zero(), vec![])
            }
            SamplerSpec::UniformRatio => spec(
                Arc::new(move |x: T| if x <= one { half } else { half / (x * x) }),
                T::zero(),
                vec![one],
            ),
            SamplerSpec::ExponentialRatio => spec(Arc::new(|x: T| ((T::one() + x) * (T::one() + x)).recip()), T::zero(), vec![]),
            SamplerSpec::SquareOverExponential { lo, hi } => spec(Arc::new(move |x: T| square_over_exp_density(lo, hi, x)), T::zero(), vec![]),
            SamplerSpec::ParetoInverseCdf { alpha, x_min } => spec(
                Arc::new(move |x: T| alpha * x_min.powf(alpha) * x.powf(-alpha - one)),
                x_min,
                vec![],
            ),
            SamplerSpec::Zeta { .. } => return None,
        })
    }
}

fn square_over_exp_density<T: Real>(lo: T, hi: T, x: T) -> T {
    if !(x > T::zero()) {
        return T::zero();
    }
    let width = hi - lo;
    let (a2, b2) = (lo * lo / x, hi * hi / x);
    if a2.max(b2) > T::one() {
        // ∫_0^c v² e^{−v²/x} dv = x^{3/2} Γ(3/2) P(3/2, c²/x) / 2
        let s = T::c(1.5);
        let k = x.powf(s) * gamma(s) / T::c(2.0);
        let inner = if lo >= T::zero() {
            k * (gamma_q(s, a2) - gamma_q(s, b2))
        } else if hi <= T::zero() {
            k * (gamma_q(s, b2) - gamma_q(s, a2))
        } else {
            k * (gamma_p(s, a2) + gamma_p(s, b2))
        };
        return inner / (width * x * x);
    }
    // ∫ v² e^{−v²/x} dv = Σ (−1/x)^k/k! (hi^{2k+3} − lo^{2k+3})/(2k+3)
    let (mut pa, mut pb) = (lo.powi(3), hi.powi(3));
    let mut coef = T::one();
    let mut sum = T::zero();
    for k in 0..60 {
        let kf = T::from_count(k);
        let term = coef * (pb - pa) / (T::c(3.0) + kf + kf);
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
        coef = -coef / (kf + T::one());
        pa = pa * a2;
        pb = pb * b2;
    }
    sum / (width * x * x)
}

/// Density of a law for centering and CF quadratures. `breaks` are kinks of
/// the density; with `two_sided` the same routine is applied to x ↦ f(−x).
#[derive(Clone)]
pub struct DensitySpec<T> {
    pub density: Arc<dyn Fn(T) -> T + Send + Sync>,
    /// Left end of the support on the positive half-line.
    pub lower: T,
    pub breaks: Vec<T>,
    pub two_sided: bool,
}

impl<T> fmt::Debug for DensitySpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensitySpec").field("two_sided", &self.two_sided).finish_non_exhaustive()
    }
}

/// ∫_{lower/s}^∞ e^{iy} s f(sy) dy for a density f supported on (lower, ∞).
fn scaled_fourier<T: Real>(f: &(dyn Fn(T) -> T + Send + Sync), lower: T, breaks: &[T], s: T) -> Result<Complex<T>> {
    let tol = Tolerance::new(T::c(1e-15), T::c(1e-13));
    let one = T::one();
    let zero = T::zero();
    let g = |y: T| s * f(s * y);
    let lo = lower / s;
    let mut cuts: Vec<T> = breaks.iter().map(|&b| b / s).filter(|&y| y > lo).collect();
    if lo < one {
        cuts.push(one);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    cuts.dedup();
    let mut total = Complex::new(zero, zero);
    let mut err = zero;
    let mut start = lo;
    for &end in &cuts {
        let q = if start == zero {
            integrate_from_zero(|y| Complex::new(zero, y).exp() * g(y), end, tol)
        } else if end <= one {
            integrate(
                |u: T| {
                    let y = u.exp();
                    Complex::new(zero, y).exp() * (g(y) * y)
                },
                start.ln(),
                end.ln(),
                tol,
            )
        } else {
            integrate(|y| Complex::new(zero, y).exp() * g(y), start, end, tol)
        };
        total = total + q.value;
        err = err + q.error;
        start = end;
    }
    let tail = oscillatory_tail(|y| Complex::new(g(y), zero), start, one, tol, None);
    total = total + tail.value;
    err = err + tail.error;
    if !(err <= T::c(1e-9) * (one + total.norm())) {
        return Err(Error::QuadratureFailure { estimate: err.to_f64_lossy() });
    }
    Ok(total)
}

/// n·E sin(X/n) by quadrature against a density.
pub fn centering_bn_density<T: Real>(spec: &DensitySpec<T>, n: T) -> Result<T> {
    if !(n > T::zero()) {
        return Err(Error::RangeError(format!("n = {n} must be positive")));
    }
    let f = spec.density.as_ref();
    let pos = n * scaled_fourier(f, spec.lower, &spec.breaks, n)?.im;
    if !spec.two_sided {
        return Ok(pos);
    }
    let reflected = |x: T| f(-x);
    let neg = n * scaled_fourier(&reflected, spec.lower, &spec.breaks, n)?.im;
    Ok(pos - neg)
}

/// b_n = n·E sin(X/n) for an α = 1 catalog model.
pub fn centering_bn<T: Real>(model: &ExampleModel<T>, n: T) -> Result<T> {
    if model.limit.alpha != T::one() {
        return Err(Error::RangeError(format!("model {} is not in the alpha = 1 regime", model.name)));
    }
    let spec = model.density_spec().ok_or(Error::UnsupportedVariant)?;
    centering_bn_density(&spec, n)
}

/// Characteristic function of a catalog model with a density, by quadrature.
pub fn model_cf<T: Real>(model: &ExampleModel<T>, t: T) -> Result<Complex<T>> {
    let spec = model.density_spec().ok_or(Error::UnsupportedVariant)?;
    if t == T::zero() {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let v = scaled_fourier(spec.density.as_ref(), spec.lower, &spec.breaks, t.abs().recip())?;
    Ok(if t > T::zero() { v } else { v.conj() })
}

/// E V² and E V² log V² for V uniform on (q − 1, q).
pub fn vsq_moments<T: Real>(q: T) -> (T, T) {
    let three = T::c(3.0);
    let one = T::one();
    let m2 = three * q * q - three * q + one;
    let xlx = |x: T| if x == T::zero() { T::zero() } else { x.powi(3) * x.abs().ln() };
    let mu = m2 / three;
    let nu = T::c(2.0) * (xlx(q) + xlx(one - q)) / three - T::c(2.0) * m2 / T::c(9.0);
    (mu, nu)
}

fn explicit_alpha1<T: Real>(name: ExampleName<T>, sampler: SamplerSpec<T>, limit: StableParams<T>, log_coeff: T) -> ExampleModel<T> {
    ExampleModel {
        name,
        sampler_spec: sampler,
        norming: NormingScheme {
            alpha: T::one(),
            scaling: Scaling::PowerInvAlpha,
            centering: Centering::Explicit { log_coeff, constant: T::zero() },
        },
        limit,
        mean: None,
    }
}

/// The worked examples with their limits and normings.
pub fn example_catalog<T: Real>(name: ExampleName<T>) -> Result<ExampleModel<T>> {
    let one = T::one();
    let eg = T::euler_gamma();
    let half_pi = T::FRAC_PI_2();
    let over_exp = StableParams::s1(one, one, half_pi, one - T::c(2.0) * eg)?;
    Ok(match name {
        ExampleName::OneOverU => {
            explicit_alpha1(name, SamplerSpec::InverseUniform, StableParams::s1(one, one, half_pi, one - eg)?, one)
        }
        ExampleName::OneOverExp => explicit_alpha1(name, SamplerSpec::InverseExponential, over_exp, one),
        ExampleName::UniformRatio => {
            let base = StableParams::s1(one, one, half_pi, one - eg)?;
            let (limit, k) = mult_transform_alpha1(&base, T::c(0.5), T::c(-0.25))?;
            explicit_alpha1(name, SamplerSpec::UniformRatio, limit, k)
        }
        ExampleName::ExpRatio => {
            let (limit, k) = mult_transform_alpha1(&over_exp, one, one - eg)?;
            explicit_alpha1(name, SamplerSpec::ExponentialRatio, limit, k)
        }
        ExampleName::VsqOverW { q } => {
            if !q.is_finite() {
                return Err(Error::InvalidParameter(format!("q = {q} must be finite")));
            }
            let (mu, nu) = vsq_moments(q);
            let (limit, k) = mult_transform_alpha1(&over_exp, mu, nu)?;
            explicit_alpha1(name, SamplerSpec::SquareOverExponential { lo: q - one, hi: q }, limit, k)
        }
        ExampleName::Pareto { alpha, c } => {
            let spec = TailSpec::new(alpha, c, one)?;
            let (limit, norming) = limit_params(&spec)?;
            let x_min = c.powf(alpha.recip());
            let mean = (alpha > one).then(|| alpha * x_min / (alpha - one));
            ExampleModel { name, sampler_spec: SamplerSpec::ParetoInverseCdf { alpha, x_min }, norming, limit, mean }
        }
        ExampleName::IntPower { alpha } => {
            if alpha == one {
                return Err(Error::RangeError("int-power needs alpha != 1".into()));
            }
            let c = zeta(alpha + one).recip();
            let spec = TailSpec::lattice(alpha, c)?;
            let (limit, norming) = limit_params(&spec)?;
            let mean = (alpha > one).then(|| zeta(alpha) * c);
            ExampleModel { name, sampler_spec: SamplerSpec::Zeta { alpha }, norming, limit, mean }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::pdf_at_zero_beta1;
    use crate::infdiv::{stable_levy, stable_params_from_measures};
    use crate::params::{cf, laplace, Convention};
    use crate::quad::integrate_real;
    use crate::special::cosine_integral;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const EG: f64 = 0.577_215_664_901_532_860_6;

    #[test]
    fn alpha_one_limit() {
        let (p, n) = limit_params(&TailSpec::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(p.gamma, PI / 2.0, max_relative = 1e-15);
        assert_eq!(p.beta, 1.0);
        assert_eq!(p.delta, 0.0);
        assert_eq!(n.centering, Centering::NESin);
    }

    #[test]
    fn symmetric_tails_give_zero_skew() {
        let (p, n) = limit_params(&TailSpec::new(0.7, 2.0, 0.5).unwrap()).unwrap();
        assert_eq!(p.beta, 0.0);
        assert_eq!(n.centering, Centering::Zero);
    }

    #[test]
    fn half_alpha_scale() {
        let (p, _) = limit_params(&TailSpec::new(0.5_f64, 1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(p.gamma.sqrt(), (PI / 2.0).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn measure_route_agrees() {
        for &(a, c, pp) in &[(0.4, 1.3, 1.0), (0.9, 0.5, 0.3), (1.0, 2.0, 0.8), (1.5, 1.0, 0.1), (1.8, 0.7, 0.5)] {
            let spec = TailSpec::<f64>::new(a, c, pp).unwrap();
            let (p, _) = limit_params(&spec).unwrap();
            let levy = stable_levy(a, pp * c * a, (1.0 - pp) * c * a).unwrap();
            let q = stable_params_from_measures(&levy).unwrap().to_s1().unwrap();
            assert_relative_eq!(p.gamma, q.gamma, max_relative = 1e-12);
            assert!((p.beta - q.beta).abs() < 1e-12);
        }
    }

    #[test]
    fn laplace_closed_forms() {
        let spec = TailSpec::new(0.5_f64, 1.0, 1.0).unwrap();
        assert_relative_eq!(limit_laplace_beta1(&spec, 1.0).unwrap(), (-PI.sqrt()).exp(), max_relative = 1e-14);
        assert_eq!(limit_laplace_beta1(&spec, 0.0).unwrap(), 1.0);
        let lat = TailSpec::lattice(1.5, 1.0).unwrap();
        assert_relative_eq!(lat.c, 1.0 / 1.5);
        assert_relative_eq!(limit_laplace_beta1(&lat, 1.0).unwrap(), (4.0 * PI.sqrt() / 3.0).exp(), max_relative = 1e-13);
        assert!(matches!(limit_laplace_beta1(&TailSpec::new(1.0, 1.0, 1.0).unwrap(), 1.0), Err(Error::RangeError(_))));
        for &(a, c) in &[(0.3, 2.0), (0.8, 0.5), (1.3, 1.0), (1.7, 3.0)] {
            for spec in [TailSpec::new(a, c, 1.0).unwrap(), TailSpec::lattice(a, c).unwrap()] {
                let (p, _) = limit_params(&spec).unwrap();
                for k in 0..=10 {
                    let t = 0.5 * k as f64;
                    let want = laplace(&p, Complex::new(t, 0.0)).unwrap().re;
                    assert_relative_eq!(limit_laplace_beta1(&spec, t).unwrap(), want, max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn density_at_zero_routes() {
        let spec = TailSpec::new(1.5, 1.0, 1.0).unwrap();
        let f0 = density_at_zero_limit(&spec).unwrap();
        let g = gamma(-2.0 / 3.0_f64).abs();
        assert_relative_eq!(f0, (2.0 * PI.sqrt()).powf(-2.0 / 3.0) / g, max_relative = 1e-13);
        let (p, _) = limit_params(&spec).unwrap();
        assert_relative_eq!(pdf_at_zero_beta1(p.gamma, 1.5).unwrap(), f0, max_relative = 1e-10);
        let eight = density_at_zero_limit(&TailSpec::new(1.5, 8.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(eight, f0 / 4.0, max_relative = 1e-13);
    }

    #[test]
    fn alpha2_boundary() {
        let e2 = std::f64::consts::E.powi(2);
        let l = alpha2_limit(1.0, e2).unwrap();
        assert_relative_eq!(l.a_n, std::f64::consts::E * 2f64.sqrt(), max_relative = 1e-14);
        let n = 1e6_f64;
        let l = alpha2_limit(2.0, n).unwrap();
        assert_relative_eq!(l.ratio, 2.0 * (1.0 + n.ln().ln() / n.ln()), max_relative = 1e-13);
        assert!(l.ratio / 2.0 > 1.18 && l.ratio / 2.0 < 1.2);
        let later = alpha2_limit(2.0, 1e12).unwrap();
        assert!(later.ratio < l.ratio);
    }

    #[test]
    fn epower2_truncated_moment() {
        // P(X > x) = x^{-2} on x >= 1.
        let x = 50.0;
        let exact = integrate_real(|y: f64| y * y * 2.0 / y.powi(3), 1.0, x, Tolerance::new(0.0, 1e-13)).value;
        assert_relative_eq!(exact, truncated_second_moment(1.0, x), max_relative = 1e-12);
    }

    #[test]
    fn fit_recovers_stable_coefficients() {
        for &(a, kappa, lambda) in &[(0.5, 1.3, 0.4), (1.5, 0.8, -0.6), (1.0, 2.0, 0.0), (1.9, 1.1, 0.2)] {
            let cf = |t: f64| (-Complex::new(kappa, -lambda) * t.powf(a)).exp();
            let fit = cf_expansion_fit(cf, a, false).unwrap();
            assert!((fit.kappa - kappa).abs() < 1e-6, "{a}: {fit:?}");
            assert!((fit.lambda - lambda).abs() < 1e-6, "{a}: {fit:?}");
        }
        let fit = cf_expansion_fit(|t: f64| Complex::new((-t * t / 2.0).exp(), 0.0), 2.0, false).unwrap();
        assert!((fit.kappa - 0.5).abs() < 1e-6 && fit.lambda.abs() < 1e-6);
    }

    #[test]
    fn fit_with_log_term() {
        let p = StableParams::s1(1.0, 0.6, 1.4, -0.3).unwrap();
        let fit = cf_expansion_fit(|t: f64| cf(&p, t), 1.0, true).unwrap();
        let b = 2.0 / PI * 0.6 * 1.4;
        assert!((fit.b.unwrap() - b).abs() < 1e-6);
        assert!((fit.kappa - 1.4).abs() < 1e-6);
        // Im(1 - φ)/t = -δ + b log t, so λ = δ.
        assert!((fit.lambda - -0.3).abs() < 1e-6, "{fit:?}");
    }

    #[test]
    fn fit_rejects_wrong_index() {
        let cf = |t: f64| (-Complex::new(1.0, 0.0) * t.powf(0.5)).exp();
        assert_eq!(cf_expansion_fit(cf, 1.0, false), Err(Error::FitDiverged));
    }

    #[test]
    fn mult_transform_cases() {
        let z = StableParams::s1(0.5, 1.0, 2.0, 0.0).unwrap();
        assert_eq!(mult_transform(&z, 1.0).unwrap(), z);
        let w = mult_transform(&z, 0.5).unwrap();
        assert_relative_eq!(w.gamma, 0.5, max_relative = 1e-15);
        assert_eq!(w.beta, 1.0);
        let shifted = StableParams::s1(0.5, 1.0, 2.0, 0.1).unwrap();
        assert_eq!(mult_transform(&shifted, 0.5), Err(Error::NotStrictlyStable));
    }

    #[test]
    fn mult_transform_alpha1_cases() {
        let z = StableParams::s1(1.0, 1.0, PI / 2.0, 1.0 - EG).unwrap();
        let (same, k) = mult_transform_alpha1(&z, 1.0, 0.0).unwrap();
        assert_eq!(same, z);
        assert_relative_eq!(k, 1.0, max_relative = 1e-15);
        let (u, _) = mult_transform_alpha1(&z, 0.5, -0.25).unwrap();
        assert_relative_eq!(u.gamma, PI / 4.0, max_relative = 1e-15);
        assert_relative_eq!(u.delta, 0.75 - EG / 2.0, max_relative = 1e-14);
        let y = StableParams::s1(1.0, 1.0, PI / 2.0, 1.0 - 2.0 * EG).unwrap();
        let (e, _) = mult_transform_alpha1(&y, 1.0, 1.0 - EG).unwrap();
        assert_relative_eq!(e.delta, -EG, max_relative = 1e-14);
        assert!(mult_transform_alpha1(&StableParams::s1(1.5, 1.0, 1.0, 0.0).unwrap(), 1.0, 0.0).is_err());
    }

    #[test]
    fn vsq_half_matches_specialised_constants() {
        let m = example_catalog(ExampleName::VsqOverW { q: 0.5 }).unwrap();
        let (mu, nu) = vsq_moments(0.5);
        assert_relative_eq!(mu, 1.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(nu, -(3.0 * 2f64.ln() + 1.0) / 18.0, max_relative = 1e-14);
        assert_relative_eq!(m.limit.gamma, PI / 24.0, max_relative = 1e-15);
        assert_relative_eq!(m.limit.delta, (5.0 - 6.0 * EG + 6.0 * 2f64.ln()) / 36.0, max_relative = 1e-13);
        assert_eq!(m.limit.beta, 1.0);
    }

    #[test]
    fn vsq_moments_by_quadrature() {
        let tol = Tolerance::new(0.0, 1e-13);
        for &q in &[-1.3, 0.0, 0.25, 1.0, 2.7] {
            let (mu, nu) = vsq_moments(q);
            let m = integrate_real(|v: f64| v * v, q - 1.0, q, tol).value;
            let l = integrate_real(|v: f64| if v == 0.0 { 0.0 } else { v * v * (v * v).ln() }, q - 1.0, q, tol).value;
            assert_relative_eq!(mu, m, max_relative = 1e-12);
            assert!((nu - l).abs() < 1e-11, "{q}: {nu} vs {l}");
        }
        let (m0, n0) = vsq_moments(1e-9_f64);
        let (m1, n1) = vsq_moments(0.0);
        assert!((m0 - m1).abs() < 1e-8 && (n0 - n1).abs() < 1e-8);
    }

    #[test]
    fn catalog_limits() {
        let u = example_catalog::<f64>(ExampleName::OneOverU).unwrap();
        assert_relative_eq!(u.limit.gamma, PI / 2.0);
        assert_relative_eq!(u.limit.delta, 1.0 - EG, max_relative = 1e-15);
        assert_eq!(u.norming.centering, Centering::Explicit { log_coeff: 1.0, constant: 0.0 });
        let r = example_catalog::<f64>(ExampleName::UniformRatio).unwrap();
        assert_relative_eq!(r.limit.gamma, PI / 4.0);
        assert_eq!(r.norming.centering, Centering::Explicit { log_coeff: 0.5, constant: 0.0 });
        let p = example_catalog(ExampleName::Pareto { alpha: 0.5, c: 1.0 }).unwrap();
        assert_relative_eq!(p.limit.gamma, PI / 2.0, max_relative = 1e-14);
        let z = example_catalog(ExampleName::IntPower { alpha: 1.5 }).unwrap();
        assert_relative_eq!(z.mean.unwrap(), zeta(1.5) / zeta(2.5), max_relative = 1e-14);
        assert!(example_catalog(ExampleName::IntPower { alpha: 1.0 }).is_err());
        assert!(matches!(ExampleName::<f64>::parse("nope", None, None, None), Err(Error::UnknownExample(_))));
        assert_eq!(p.limit.convention, Convention::S1);
    }

    #[test]
    fn one_over_u_centering_against_cosine_integral() {
        let m = example_catalog::<f64>(ExampleName::OneOverU).unwrap();
        for &n in &[10.0_f64, 1e3, 1e6] {
            let e = 1.0 / n;
            // ∫_ε^∞ sin y / y² dy = sin ε / ε − Ci(ε)
            let exact = e.sin() / e - cosine_integral(e);
            let bn = centering_bn(&m, n).unwrap();
            assert!((bn - exact).abs() < 1e-10, "{n}: {bn} vs {exact}");
        }
        let bn = centering_bn(&m, 1e6).unwrap();
        assert!((bn - (1e6f64.ln() + 1.0 - EG)).abs() < 2e-6);
    }

    #[test]
    fn centering_converges_monotonically() {
        let m = example_catalog::<f64>(ExampleName::OneOverU).unwrap();
        let gaps: Vec<f64> = (3..=7).map(|k| {
            let n = 10f64.powi(k);
            (centering_bn(&m, n).unwrap() - n.ln() - (1.0 - EG)).abs()
        }).collect();
        // The exact gap is about 1/(12n²); quadrature noise dominates past n = 1e5.
        assert!(gaps.windows(2).all(|w| w[1] <= w[0].max(1e-9)), "{gaps:?}");
        assert!(gaps[0] > gaps[1] && gaps[1] > 1e-3 * gaps[0]);
    }

    #[test]
    fn centering_other_models() {
        let n = 1e6;
        let e = example_catalog::<f64>(ExampleName::OneOverExp).unwrap();
        assert!((centering_bn(&e, n).unwrap() - (n.ln() + 1.0 - 2.0 * EG)).abs() < 1e-4);
        for name in [ExampleName::UniformRatio, ExampleName::ExpRatio, ExampleName::VsqOverW { q: 0.5 }] {
            let m = example_catalog(name).unwrap();
            let bn = centering_bn(&m, n).unwrap();
            let want = m.bn_asymptotic(n).unwrap();
            assert!((bn - want).abs() < 1e-3, "{name}: {bn} vs {want}");
        }
    }

    #[test]
    fn vsq_density_series_matches_quadrature() {
        for &q in &[0.5, -0.4, 2.0] {
            for &x in &[1e-3, 0.1, 0.7, 4.5, 10.0, 1e3] {
                let want = integrate_real(|v: f64| v * v * (-(v * v) / x).exp(), q - 1.0, q, Tolerance::new(0.0, 1e-14)).value / (x * x);
                assert_relative_eq!(square_over_exp_density(q - 1.0, q, x), want, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn symmetric_density_has_zero_centering() {
        let spec = DensitySpec {
            density: Arc::new(|x: f64| 0.5 / (1.0 + x.abs()).powi(2)),
            lower: 0.0,
            breaks: vec![],
            two_sided: true,
        };
        assert_eq!(centering_bn_density(&spec, 1e4).unwrap(), 0.0);
    }

    #[test]
    fn model_cf_one_over_u() {
        use crate::special::sine_integral;
        let m = example_catalog::<f64>(ExampleName::OneOverU).unwrap();
        for &t in &[1e-5_f64, 0.3, 2.0, 7.0] {
            let want = Complex::new(t.cos() - t * (PI / 2.0 - sine_integral(t)), t.sin() - t * cosine_integral(t));
            let got = model_cf(&m, t).unwrap();
            assert!((got - want).norm() < 1e-11, "{t}: {got} vs {want}");
            assert_eq!(model_cf(&m, -t).unwrap(), got.conj());
        }
    }

    #[test]
    fn fit_on_one_over_u() {
        let m = example_catalog::<f64>(ExampleName::OneOverU).unwrap();
        let fit = cf_expansion_fit(|t| model_cf(&m, t).unwrap(), 1.0, true).unwrap();
        assert!((fit.b.unwrap() - 1.0).abs() < 1e-2, "{fit:?}");
        assert!((fit.kappa - PI / 2.0).abs() < 1e-2, "{fit:?}");
    }
}
