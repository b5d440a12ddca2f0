//! Seeded simulation of the catalog models, normalized sums and Poisson-process
//! integrals, with empirical-CF and Kolmogorov–Smirnov distances to the
//! predicted limits.
//!
//! Every replicate draws from its own ChaCha8 substream (seed, replicate
//! index), so results do not depend on how rayon schedules the work.

use num_complex::Complex;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::cdf;
use crate::doa::{centering_bn, Centering, ExampleModel, NormingScheme, SamplerSpec};
use crate::error::{Error, Result};
use crate::infdiv::LevyMeasure;
use crate::params::{cf, StableParams};
use crate::special::exp_integral_e1;

/// Source of the two primitive variates every sampler is built from.
pub trait Variates {
    /// Uniform on the open interval (0, 1).
    fn uniform(&mut self) -> f64;

    /// Standard exponential.
    fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }
}

/// Counter-based stream: ChaCha8 keyed by a seed, one substream per index.
#[derive(Debug, Clone)]
pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Stream(rng)
    }
}

impl Variates for Stream {
    fn uniform(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// One draw of X for a catalog model.
pub fn sample<V: Variates + ?Sized>(model: &ExampleModel<f64>, stream: &mut V) -> f64 {
    match model.sampler_spec {
        SamplerSpec::InverseUniform => 1.0 / stream.uniform(),
        SamplerSpec::InverseExponential => 1.0 / stream.exponential(),
        SamplerSpec::UniformRatio => stream.uniform() / stream.uniform(),
        SamplerSpec::ExponentialRatio => stream.exponential() / stream.exponential(),
        SamplerSpec::SquareOverExponential { lo, hi } => {
            let v = lo + (hi - lo) * stream.uniform();
            v * v / stream.exponential()
        }
        SamplerSpec::ParetoInverseCdf { alpha, x_min } => x_min * stream.uniform().powf(-alpha.recip()),
        SamplerSpec::Zeta { alpha } => zeta_variate(alpha, stream),
    }
}

// Devroye's rejection sampler for P(X = n) ∝ n^{−α−1}.
fn zeta_variate<V: Variates + ?Sized>(alpha: f64, stream: &mut V) -> f64 {
    let b = 2f64.powf(alpha);
    loop {
        let u = stream.uniform();
        let v = stream.uniform();
        let x = u.powf(-alpha.recip()).floor();
        if !x.is_finite() {
            continue;
        }
        let t = (1.0 + 1.0 / x).powf(alpha);
        if v * x * (t - 1.0) / (b - 1.0) <= t / b {
            return x;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: u64,
    pub reps: usize,
    pub seed: u64,
    pub t_grid: Vec<f64>,
}

impl SimConfig {
    pub fn new(n: u64, reps: usize, seed: u64, t_grid: Vec<f64>) -> Result<Self> {
        if n == 0 || reps == 0 {
            return Err(Error::InvalidParameter("n and reps must be at least 1".into()));
        }
        if t_grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("t grid must be finite".into()));
        }
        Ok(SimConfig { n, reps, seed, t_grid })
    }
}

/// Evenly spaced grid on [−t_max, t_max].
pub fn symmetric_grid(t_max: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![0.0];
    }
    (0..points).map(|k| -t_max + 2.0 * t_max * k as f64 / (points - 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantile {
    pub level: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: usize,
    pub quantiles: Vec<Quantile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub normalized_samples: SampleSummary,
    pub ecf_distance: f64,
    pub ks_distance: f64,
    pub predicted: StableParams<f64>,
    pub norming: NormingScheme<f64>,
    pub a_n: f64,
    /// Value subtracted from S_n/a_n.
    pub centering: f64,
    #[serde(skip)]
    pub samples: Vec<f64>,
}

impl SimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Normalized samples as a single-column CSV.
    pub fn samples_csv(&self) -> String {
        let mut out = String::from("normalized_sum\n");
        for x in &self.samples {
            out.push_str(&format!("{x:.16e}\n"));
        }
        out
    }
}

const SUMMARY_LEVELS: [f64; 9] = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99];
const KS_GRID: usize = 1000;

/// Empirical quantile of sorted data, linear interpolation between order statistics.
pub fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    let pos = level.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// (1/m) Σ e^{itX_j}.
pub fn empirical_cf(samples: &[f64], t: f64) -> Complex<f64> {
    let (c, s) = samples.iter().fold((0.0, 0.0), |(c, s), &x| {
        let (sn, cs) = (t * x).sin_cos();
        (c + cs, s + sn)
    });
    let m = samples.len() as f64;
    Complex::new(c / m, s / m)
}

/// max over the grid of |empirical CF − CF of `law`|.
pub fn ecf_distance(samples: &[f64], law: &StableParams<f64>, t_grid: &[f64]) -> f64 {
    t_grid.iter().map(|&t| (empirical_cf(samples, t) - cf(law, t)).norm()).fold(0.0, f64::max)
}

/// sup |F_m − F| for sorted samples, F interpolated linearly from its values
/// at 10³ empirical quantiles.
pub fn ks_distance_sorted<F>(sorted: &[f64], mut dist: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = sorted.len();
    let mut knots: Vec<f64> = (0..KS_GRID).map(|k| quantile_sorted(sorted, k as f64 / (KS_GRID - 1) as f64)).collect();
    knots.dedup();
    let values = knots.iter().map(|&x| dist(x)).collect::<Result<Vec<f64>>>()?;
    let mut d: f64 = 0.0;
    let mut k = 0;
    for (i, &x) in sorted.iter().enumerate() {
        while k + 2 < knots.len() && knots[k + 1] < x {
            k += 1;
        }
        let f = if knots.len() == 1 || x <= knots[0] {
            values[0]
        } else {
            let (x0, x1) = (knots[k], knots[k + 1]);
            let w = if x1 > x0 { ((x - x0) / (x1 - x0)).clamp(0.0, 1.0) } else { 1.0 };
            values[k] + w * (values[k + 1] - values[k])
        };
        let lo = i as f64 / m as f64;
        let hi = (i + 1) as f64 / m as f64;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    Ok(d)
}

/// Amount subtracted from S_n/a_n under the model's norming.
pub fn centering_value(model: &ExampleModel<f64>, n: u64) -> Result<f64> {
    let nf = n as f64;
    let a_n = model.norming.a_n(nf);
    Ok(match model.norming.centering {
        Centering::Zero => 0.0,
        Centering::NMean => nf * model.mean.ok_or(Error::UnsupportedVariant)? / a_n,
        Centering::NESin => centering_bn(model, a_n)?,
        Centering::Explicit { log_coeff, constant } => log_coeff * nf.ln() + constant,
    })
}

/// (S_n − b_n)/a_n for every replicate, in replicate order.
pub fn normalized_sums(model: &ExampleModel<f64>, cfg: &SimConfig) -> Result<Vec<f64>> {
    let a_n = model.norming.a_n(cfg.n as f64);
    let shift = centering_value(model, cfg.n)?;
    let sums = (0..cfg.reps)
        .into_par_iter()
        .map(|r| {
            let mut stream = Stream::new(cfg.seed, r as u64);
            let s: f64 = (0..cfg.n).map(|_| sample(model, &mut stream)).sum();
            s / a_n - shift
        })
        .collect();
    Ok(sums)
}

/// Simulates normalized sums and compares them with the model's limit.
pub fn simulate_sums(model: &ExampleModel<f64>, cfg: &SimConfig) -> Result<SimReport> {
    let samples = normalized_sums(model, cfg)?;
    let mut sorted = samples.clone();
    sorted.sort_by(f64::total_cmp);
    let law = model.limit;
    let ecf = ecf_distance(&samples, &law, &cfg.t_grid);
    let ks = ks_distance_sorted(&sorted, |x| cdf(&law, x))?;
    let quantiles = SUMMARY_LEVELS.iter().map(|&level| Quantile { level, value: quantile_sorted(&sorted, level) }).collect();
    Ok(SimReport {
        normalized_samples: SampleSummary { count: samples.len(), quantiles },
        ecf_distance: ecf,
        ks_distance: ks,
        predicted: law,
        norming: model.norming,
        a_n: model.norming.a_n(cfg.n as f64),
        centering: centering_value(model, cfg.n)?,
        samples,
    })
}

/// Largest |t| at which the truncated Poisson integral is accurate.
pub const RESIDUAL_T_MAX: f64 = 5.0;
/// Bound on the CF error from the small-jump approximation for |t| ≤ RESIDUAL_T_MAX.
pub const RESIDUAL_CF_ERROR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Jumps {
    Atom { at: f64 },
    Pair { alpha: f64, eps: f64, p_plus: f64 },
    Gamma { eps: f64 },
}

/// Sampler for X = ∫x dΞ(x) (or its compensated version) over a Poisson
/// process with intensity Λ. Jumps below a cut ε are replaced by a normal
/// variable with the same mean and variance.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonIntegral {
    jumps: Jumps,
    /// Expected number of retained jumps.
    pub intensity: f64,
    small_mean: f64,
    small_sd: f64,
    /// Subtracted from every draw.
    compensator: f64,
}

impl PoissonIntegral {
    pub fn new(levy: &LevyMeasure<f64>, compensated: bool) -> Result<Self> {
        let budget = 6.0 * RESIDUAL_CF_ERROR / RESIDUAL_T_MAX.powi(3);
        match *levy {
            LevyMeasure::PointMass { mass, at } => Ok(PoissonIntegral {
                jumps: Jumps::Atom { at },
                intensity: mass,
                small_mean: 0.0,
                small_sd: 0.0,
                compensator: if compensated { mass * at } else { 0.0 },
            }),
            LevyMeasure::StablePair { c_plus, c_minus, alpha } => {
                if compensated != (alpha > 1.0) {
                    return Err(Error::IntegrabilityError);
                }
                let c = c_plus + c_minus;
                // ∫_{|x|≤ε} |x|³ dΛ = c ε^{3−α}/(3−α)
                let eps = (budget * (3.0 - alpha) / c).powf((3.0 - alpha).recip());
                let drift = (c_plus - c_minus) * eps.powf(1.0 - alpha) / (1.0 - alpha);
                let (small_mean, compensator) = if compensated {
                    // ∫_{|x|>ε} x dΛ; the small jumps are centred.
                    (0.0, -drift)
                } else {
                    (drift, 0.0)
                };
                Ok(PoissonIntegral {
                    jumps: Jumps::Pair { alpha, eps, p_plus: c_plus / c },
                    intensity: c * eps.powf(-alpha) / alpha,
                    small_mean,
                    small_sd: (c * eps.powf(2.0 - alpha) / (2.0 - alpha)).sqrt(),
                    compensator,
                })
            }
            LevyMeasure::GammaTail { shape } => {
                // ∫_0^ε x³ e^{−x}/x dx ≤ ε³/3
                let eps = (3.0 * budget / shape).cbrt().min(1.0);
                let small_mean = shape * (1.0 - (-eps).exp());
                let small_var = shape * (1.0 - (1.0 + eps) * (-eps).exp());
                Ok(PoissonIntegral {
                    jumps: Jumps::Gamma { eps },
                    intensity: shape * exp_integral_e1(eps),
                    small_mean: if compensated { 0.0 } else { small_mean },
                    small_sd: small_var.sqrt(),
                    compensator: if compensated { shape - small_mean } else { 0.0 },
                })
            }
            LevyMeasure::GenericDensity(_) => Err(Error::UnsupportedVariant),
        }
    }

    pub fn draw<V: Variates + ?Sized>(&self, stream: &mut V) -> f64 {
        // Arrival times of a unit-rate process on [0, intensity].
        let mut total = 0.0;
        let mut clock = stream.exponential();
        while clock <= self.intensity {
            total += match self.jumps {
                Jumps::Atom { at } => at,
                Jumps::Pair { alpha, eps, p_plus } => {
                    let size = eps * stream.uniform().powf(-alpha.recip());
                    if stream.uniform() < p_plus {
                        size
                    } else {
                        -size
                    }
                }
                Jumps::Gamma { eps } => loop {
                    let x = eps + stream.exponential();
                    if stream.uniform() * x <= eps {
                        break x;
                    }
                },
            };
            clock += stream.exponential();
        }
        if self.small_sd > 0.0 {
            total += self.small_mean + self.small_sd * standard_normal(stream);
        } else {
            total += self.small_mean;
        }
        total - self.compensator
    }
}

// Box–Muller from two uniforms.
fn standard_normal<V: Variates + ?Sized>(stream: &mut V) -> f64 {
    let r = (2.0 * stream.exponential()).sqrt();
    r * (std::f64::consts::TAU * stream.uniform()).cos()
}

/// One draw of the Poisson-process integral for `levy`.
pub fn poisson_integral_sample<V: Variates + ?Sized>(levy: &LevyMeasure<f64>, stream: &mut V, compensated: bool) -> Result<f64> {
    Ok(PoissonIntegral::new(levy, compensated)?.draw(stream))
}

/// `draws` independent Poisson integrals, substream per draw.
pub fn poisson_integral_samples(levy: &LevyMeasure<f64>, compensated: bool, draws: usize, seed: u64) -> Result<Vec<f64>> {
    let sampler = PoissonIntegral::new(levy, compensated)?;
    Ok((0..draws).into_par_iter().map(|i| sampler.draw(&mut Stream::new(seed, i as u64))).collect())
}
