//! Deterministic, seed-reproducible samplers for the scalar distributions
//! the matrix models are built from: normal, chi (real degrees of freedom),
//! gamma, beta and symmetric Dirichlet.
//!
//! Every sampler consumes a caller-provided [`RngStream`]; there is no global
//! RNG. Streams are cheap values that can be derived, cloned and moved between
//! threads, which is what makes parallel Monte Carlo runs reproducible: trial
//! `t` always draws from `root.substream(t)` no matter how many workers run.

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 step: advances `state` and returns the next output word.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic random stream identified by `(seed, stream_id)`.
///
/// The generator is xoshiro256++ with its state expanded from the pair by a
/// splitmix64 chain. Identical `(seed, stream_id)` pairs produce identical
/// draw sequences; child streams derived with [`RngStream::substream`] share
/// no state with their parent or siblings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    state: [u64; 4],
}

impl RngStream {
    /// Root stream for a seed (`stream_id = 0`).
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Stream at an explicit `(seed, stream_id)` coordinate.
    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        let mut sm = seed.wrapping_add(stream_id.wrapping_mul(GOLDEN_GAMMA));
        let mut state = [0u64; 4];
        for word in &mut state {
            *word = splitmix64(&mut sm);
        }
        // xoshiro state must not be all zero
        if state == [0; 4] {
            state[0] = GOLDEN_GAMMA;
        }
        RngStream {
            seed,
            stream_id,
            state,
        }
    }

    /// Derives child stream `index`: the child's stream id is a
    /// splitmix-style hash of `(stream_id, index)`.
    pub fn substream(&self, index: u64) -> Self {
        let mut sm = self.stream_id ^ index.wrapping_mul(GOLDEN_GAMMA);
        let child_id = splitmix64(&mut sm);
        Self::with_stream(self.seed, child_id)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// xoshiro256++ output step.
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0].wrapping_add(s[3]).rotate_left(23).wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `(0, 1]`; safe to pass to `ln`.
    fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::parameter(format!(
            "{name} must be finite and positive, got {value}"
        )));
    }
    Ok(())
}

/// One draw from `N(mean, variance)`.
pub fn sample_normal(stream: &mut RngStream, mean: f64, variance: f64) -> Result<f64> {
    if !mean.is_finite() {
        return Err(Error::parameter(format!("mean must be finite, got {mean}")));
    }
    check_positive("variance", variance)?;
    Ok(mean + variance.sqrt() * standard_normal(stream))
}

// Box-Muller, one value per call.
fn standard_normal(stream: &mut RngStream) -> f64 {
    let u1 = stream.next_open01();
    let u2 = stream.next_f64();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// One draw from `Gamma(shape, scale)`.
///
/// Marsaglia-Tsang squeeze for `shape >= 1`; for `shape < 1` a draw at
/// `shape + 1` is boosted by `u^(1/shape)`. Real-valued shapes are the whole
/// point: the matrix models need chi variables with non-integer degrees of
/// freedom.
pub fn sample_gamma(stream: &mut RngStream, shape: f64, scale: f64) -> Result<f64> {
    check_positive("shape", shape)?;
    check_positive("scale", scale)?;
    Ok(gamma_unchecked(stream, shape, scale))
}

fn gamma_unchecked(stream: &mut RngStream, shape: f64, scale: f64) -> f64 {
    if shape < 1.0 {
        let u = stream.next_open01();
        let boosted = gamma_unchecked(stream, shape + 1.0, scale);
        // underflow guard keeps downstream chi / Dirichlet draws strictly positive
        return (boosted * u.powf(1.0 / shape)).max(f64::MIN_POSITIVE);
    }

    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = standard_normal(stream);
        let cube_root = 1.0 + c * x;
        if cube_root <= 0.0 {
            continue;
        }
        let v = cube_root * cube_root * cube_root;
        let u = stream.next_open01();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return (d * v * scale).max(f64::MIN_POSITIVE);
        }
    }
}

/// One draw from the chi distribution with `dof` (real, positive) degrees of
/// freedom: the square root of `Gamma(dof / 2, 2)`.
pub fn sample_chi(stream: &mut RngStream, dof: f64) -> Result<f64> {
    check_positive("dof", dof)?;
    Ok(gamma_unchecked(stream, 0.5 * dof, 2.0).sqrt())
}

/// One draw from `Beta(x, y)`, constructed as `G1 / (G1 + G2)` with
/// independent `Gamma(x, 1)` and `Gamma(y, 1)` draws.
pub fn sample_beta(stream: &mut RngStream, x: f64, y: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    let g1 = gamma_unchecked(stream, x, 1.0);
    let g2 = gamma_unchecked(stream, y, 1.0);
    Ok(g1 / (g1 + g2))
}

/// One draw from the symmetric Dirichlet distribution with `n` components and
/// concentration `alpha`: normalized i.i.d. `Gamma(alpha, 1)` variables.
///
/// The returned weights are strictly positive and their left-to-right sum is
/// exactly `1.0`: after normalization the last component is recomputed as the
/// complement of the prefix sum, with an ulp-level cleanup pass for the
/// sparse draws small `alpha` produces.
pub fn sample_dirichlet_sym(stream: &mut RngStream, n: usize, alpha: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::parameter("dirichlet dimension must be >= 1"));
    }
    check_positive("alpha", alpha)?;
    if n == 1 {
        // one draw is consumed so the stream advances the same way for every n
        let _ = gamma_unchecked(stream, alpha, 1.0);
        return Ok(vec![1.0]);
    }

    let mut weights: Vec<f64> = (0..n)
        .map(|_| gamma_unchecked(stream, alpha, 1.0))
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        // small alpha makes the normalized vector extremely sparse; the
        // division may underflow a clamped draw back to zero
        *w = (*w / total).max(f64::MIN_POSITIVE);
    }

    // Drive the left-to-right sum to land on 1.0 bit-exactly. With
    // `partial < 1` the completion `last = 1 - partial` makes the final
    // fold round to 1 (the error of `1 - partial` is at most a half ulp of
    // 1). `partial >= 1` can happen when the true last weight is below one
    // ulp: shave the excess off the largest weight and retry.
    for _ in 0..64 {
        let partial: f64 = weights[..n - 1].iter().sum();
        if partial < 1.0 {
            weights[n - 1] = 1.0 - partial;
            return Ok(weights);
        }
        if partial == 1.0 {
            // 1 + MIN_POSITIVE rounds back to 1
            weights[n - 1] = f64::MIN_POSITIVE;
            return Ok(weights);
        }
        let excess = partial - 1.0;
        let argmax = (0..n - 1)
            .max_by(|&a, &b| weights[a].total_cmp(&weights[b]))
            .expect("n >= 2");
        if weights[argmax] <= excess {
            break;
        }
        weights[argmax] -= excess;
    }
    Err(Error::Numerical(
        "dirichlet renormalization failed to settle on an exact unit sum".into(),
    ))
}
