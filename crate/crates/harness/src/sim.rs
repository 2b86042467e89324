//! Seeded Monte-Carlo BER estimation.
//!
//! Trials (product frames or staircase chains) are numbered per operating
//! point and trial `i` draws all of its randomness from
//! `substream(point_seed, i)`. Trials run in rounds of `batch`; the stopping
//! rule is checked only between rounds, so the set of trials that contribute
//! to a record depends on the configuration and seed but never on the number
//! of workers.

use std::time::Instant;

use fec_core::channel::{substream, AwgnChannel, ChannelParams, SimRng};
use fec_core::product::{encode_product, info_part, LlrPlane, ProductDecoder};
use fec_core::staircase::{block_info, info_bits_per_block, SlidingDecoder, StaircaseDecoder, StaircaseEncoder};
use fec_core::CodeSpec;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Scheme};
use crate::HarnessError;

/// One simulated operating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub ebn0_db: f64,
    pub bits_counted: u64,
    pub bit_errors: u64,
    pub ber: f64,
    /// Number of frames (product) or chains (staircase) simulated.
    pub trials: u64,
    /// Seed from which every trial substream of this point is derived.
    pub seed: u64,
    pub wall_time_s: f64,
    /// True when the bit budget ran out before `min_bit_errors` errors were
    /// seen; `ber` is then only an estimate with too few errors.
    pub censored: bool,
}

impl BerRecord {
    /// Equality of everything except the wall-clock time.
    pub fn same_outcome(&self, other: &BerRecord) -> bool {
        self.ebn0_db == other.ebn0_db
            && self.bits_counted == other.bits_counted
            && self.bit_errors == other.bit_errors
            && self.trials == other.trials
            && self.seed == other.seed
            && self.censored == other.censored
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    bits: u64,
    errors: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one operating point, a function of the master seed and Eb/N0 only.
pub fn point_seed(master: u64, ebn0_db: f64) -> u64 {
    splitmix64(master ^ splitmix64(ebn0_db.to_bits()))
}

fn count_errors(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

fn random_bits(rng: &mut SimRng, count: usize) -> Vec<u8> {
    (0..count).map(|_| rng.gen::<bool>() as u8).collect()
}

enum Engine {
    Product {
        decoder: ProductDecoder,
        iterations: usize,
    },
    Staircase {
        decoder: StaircaseDecoder,
        window: usize,
        warmup: u64,
        counted: u64,
    },
}

/// Runs operating points of one configuration.
pub struct Runner {
    config: ExperimentConfig,
    spec: CodeSpec,
    engine: Engine,
    pool: rayon::ThreadPool,
}

impl Runner {
    pub fn new(config: ExperimentConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let spec = config.code()?;
        let engine = match config.scheme {
            Scheme::Product => Engine::Product {
                decoder: ProductDecoder::new(spec.clone(), config.p, config.product_rule()),
                iterations: config.iterations,
            },
            Scheme::Staircase => Engine::Staircase {
                decoder: StaircaseDecoder::new(spec.clone(), config.p, config.stair_rule()?)
                    .map_err(|e| HarnessError::Config(e.to_string()))?,
                window: config.window,
                warmup: config.warmup_blocks,
                counted: config.counted_blocks,
            },
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
        Ok(Self {
            config,
            spec,
            engine,
            pool,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn rate(&self) -> f64 {
        self.config.rate(&self.spec)
    }

    /// Simulates one Eb/N0 point until the stopping rule fires.
    pub fn run_point(&self, ebn0_db: f64) -> Result<BerRecord, HarnessError> {
        let params = ChannelParams::new(ebn0_db, self.rate()).map_err(|e| HarnessError::Config(e.to_string()))?;
        let seed = point_seed(self.config.seed, ebn0_db);
        let start = Instant::now();
        let batch = self.config.batch;
        let mut total = Tally::default();
        let mut trials = 0u64;
        let censored = loop {
            let range = trials..trials + batch;
            let results: Vec<Result<Tally, HarnessError>> = self
                .pool
                .install(|| range.into_par_iter().map(|i| self.trial(params, seed, i)).collect());
            for r in results {
                let t = r?;
                total.bits += t.bits;
                total.errors += t.errors;
            }
            trials += batch;
            if total.errors >= self.config.min_bit_errors {
                break false;
            }
            if total.bits >= self.config.max_bits {
                break true;
            }
        };
        Ok(BerRecord {
            ebn0_db,
            bits_counted: total.bits,
            bit_errors: total.errors,
            ber: total.errors as f64 / total.bits as f64,
            trials,
            seed,
            wall_time_s: start.elapsed().as_secs_f64(),
            censored,
        })
    }

    /// All points of the sweep, in ascending Eb/N0.
    pub fn run_all(&self) -> Result<Vec<BerRecord>, HarnessError> {
        let mut points = self.config.ebn0_db.clone();
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite Eb/N0"));
        points.dedup();
        points.into_iter().map(|e| self.run_point(e)).collect()
    }

    fn trial(&self, params: ChannelParams, seed: u64, index: u64) -> Result<Tally, HarnessError> {
        let mut rng = substream(seed, index);
        let mut channel = AwgnChannel::new(params);
        match &self.engine {
            Engine::Product { decoder, iterations } => {
                let (n, k) = (self.spec.n(), self.spec.k());
                let info = random_bits(&mut rng, k * k);
                let codeword = encode_product(&self.spec, &info);
                let mut llr = vec![0.0; n * n];
                channel.transmit_into(&codeword, &mut llr, &mut rng);
                let mut plane = LlrPlane::new(n, llr);
                let decided = decoder
                    .decode(&mut plane, *iterations)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                Ok(Tally {
                    bits: (k * k) as u64,
                    errors: count_errors(&info_part(&self.spec, &decided), &info),
                })
            }
            Engine::Staircase {
                decoder,
                window,
                warmup,
                counted,
            } => {
                let per_block = info_bits_per_block(&self.spec).expect("validated");
                let last_counted = warmup + counted;
                // blocks up to last_counted + w - 1 must arrive before the
                // last counted block leaves the window
                let transmitted = last_counted + *window as u64 - 1;
                let mut encoder = StaircaseEncoder::new(self.spec.clone()).expect("validated");
                let mut sliding = SlidingDecoder::new(decoder.clone(), *window).expect("validated");
                let mut pending: std::collections::VecDeque<Vec<u8>> = std::collections::VecDeque::new();
                // pending[0] holds the information of the oldest undecided block
                pending.push_back(Vec::new());
                let mut tally = Tally::default();
                let side = decoder.block_side();
                let mut llr = vec![0.0; side * side];
                for _ in 1..=transmitted {
                    let info = random_bits(&mut rng, per_block);
                    let block = encoder.next_block(&info);
                    channel.transmit_into(&block, &mut llr, &mut rng);
                    pending.push_back(info);
                    if let Some((index, bits)) = sliding
                        .push(llr.clone())
                        .map_err(|e| HarnessError::Config(e.to_string()))?
                    {
                        let truth = pending.pop_front().expect("one pending entry per block");
                        if index > *warmup && index <= last_counted {
                            tally.bits += per_block as u64;
                            tally.errors += count_errors(&block_info(&self.spec, &bits), &truth);
                        }
                    }
                }
                Ok(tally)
            }
        }
    }
}

/// Simulates one operating point of `config`.
pub fn run_point(config: &ExperimentConfig, ebn0_db: f64) -> Result<BerRecord, HarnessError> {
    Runner::new(config.clone())?.run_point(ebn0_db)
}
