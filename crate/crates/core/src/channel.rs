//! BPSK over AWGN: modulation, noise, channel LLRs and Eb/N0 bookkeeping.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Error;

/// Random number generator used for every simulation stream.
pub type SimRng = ChaCha8Rng;

/// Derives an independent generator for `(master_seed, stream)`.
///
/// The master seed keys the ChaCha generator and the stream index selects one
/// of its 2^64 non-overlapping streams, so results do not depend on which
/// worker runs which stream.
pub fn substream(master_seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Noise parameters for one operating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    /// Noise variance per real dimension.
    pub sigma2: f64,
}

impl ChannelParams {
    /// `sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))`.
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self, Error> {
        if !(rate > 0.0 && rate <= 1.0) || !ebn0_db.is_finite() {
            return Err(Error::InvalidChannel { ebn0_db, rate });
        }
        let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0));
        Ok(Self { ebn0_db, rate, sigma2 })
    }

    /// Scale factor `2 / sigma^2` mapping received samples to LLRs.
    pub fn llr_scale(&self) -> f64 {
        2.0 / self.sigma2
    }
}

/// BPSK symbol for one bit: 0 -> +1, 1 -> -1.
#[inline]
pub fn bpsk(bit: u8) -> f64 {
    1.0 - 2.0 * f64::from(bit & 1)
}

pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| bpsk(b)).collect()
}

/// Standard normal sampler using Marsaglia's polar method.
///
/// Draw `u, v` uniform on [-1, 1) until `0 < s = u^2 + v^2 < 1`, then
/// `u * sqrt(-2 ln s / s)` and `v * sqrt(-2 ln s / s)` are independent
/// N(0, 1) samples. The second sample is cached for the next call.
#[derive(Clone, Debug, Default)]
pub struct PolarGaussian {
    spare: Option<f64>,
}

impl PolarGaussian {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u: f64 = rng.gen::<f64>() * 2.0 - 1.0;
            let v: f64 = rng.gen::<f64>() * 2.0 - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// AWGN channel producing LLRs `l = (2 / sigma^2) (x + noise)`.
#[derive(Clone, Debug)]
pub struct AwgnChannel {
    params: ChannelParams,
    sigma: f64,
    gauss: PolarGaussian,
}

impl AwgnChannel {
    pub fn new(params: ChannelParams) -> Self {
        Self {
            params,
            sigma: params.sigma2.sqrt(),
            gauss: PolarGaussian::new(),
        }
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// Channel LLR for a single transmitted symbol.
    #[inline]
    pub fn llr<R: Rng + ?Sized>(&mut self, symbol: f64, rng: &mut R) -> f64 {
        let y = symbol + self.sigma * self.gauss.sample(rng);
        self.params.llr_scale() * y
    }

    /// Modulates `bits` and writes their channel LLRs into `out`.
    pub fn transmit_into<R: Rng + ?Sized>(&mut self, bits: &[u8], out: &mut [f64], rng: &mut R) {
        assert_eq!(bits.len(), out.len());
        for (o, &b) in out.iter_mut().zip(bits) {
            *o = self.llr(bpsk(b), rng);
        }
    }

    /// LLRs for already-modulated symbols.
    pub fn transmit<R: Rng + ?Sized>(&mut self, symbols: &[f64], rng: &mut R) -> Vec<f64> {
        symbols.iter().map(|&x| self.llr(x, rng)).collect()
    }
}
