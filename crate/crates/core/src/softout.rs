//! Soft-output rules for a single constituent word.
//!
//! All rules work from a [`CandidateList`] and the decoder input `l`. The
//! list weights are the unnormalized probabilities `exp(-PM(c, l))`.
//!
//! * [`proposed_soft_output`]: list sums plus a `gamma * P(c_i | l_i)` term in
//!   numerator and denominator, so no position is ever left without a
//!   competitor.
//! * [`pyndiah_raw`]: the max-approximation over correlations; positions
//!   where the list agrees are flagged as saturated.
//! * [`pyndiah_like_raw`]: the same with full sums instead of maxima.
//! * [`exact_app`]: brute force over the whole codebook, used as an oracle.

use crate::chase::{softplus, CandidateList};
use crate::ebch::CodeSpec;
use crate::Error;

/// Largest dimension for which [`exact_app`] enumerates the codebook.
pub const MAX_ORACLE_DIMENSION: usize = 20;

/// `ln(e^a + e^b)`, exact (max plus correction term).
#[inline]
pub fn max_star(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// [`max_star`] that drops the correction term once it is below 1.2e-17.
#[inline]
fn max_star_fast(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    // also covers lo = -inf, where the difference is infinite or NaN
    if lo == f64::NEG_INFINITY || hi - lo > 39.0 {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Soft output of one constituent word.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SoftOutput {
    /// Approximate log-APP ratios. For saturated positions this holds the
    /// agreed BPSK symbol (+1 or -1) instead.
    pub app: Vec<f64>,
    /// `app - l` where not saturated; the agreed symbol where saturated.
    pub extrinsic: Vec<f64>,
    pub saturated: Vec<bool>,
}

impl SoftOutput {
    pub fn new(n: usize) -> Self {
        Self {
            app: vec![0.0; n],
            extrinsic: vec![0.0; n],
            saturated: vec![false; n],
        }
    }

    fn reset(&mut self, n: usize) {
        self.app.clear();
        self.app.resize(n, 0.0);
        self.extrinsic.clear();
        self.extrinsic.resize(n, 0.0);
        self.saturated.clear();
        self.saturated.resize(n, false);
    }
}

/// Per-half-iteration weights of the Chase-Pyndiah decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct PyndiahCoefficients {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl PyndiahCoefficients {
    /// Schedule of the original turbo product decoder, starting at the first
    /// nonzero weight and held at 1.0 once reached.
    pub fn classic(half_iterations: usize) -> Self {
        const ALPHA: [f64; 6] = [0.2, 0.3, 0.5, 0.7, 0.9, 1.0];
        const BETA: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];
        let pick = |table: &[f64], i: usize| table[i.min(table.len() - 1)];
        Self {
            alpha: (0..half_iterations).map(|i| pick(&ALPHA, i)).collect(),
            beta: (0..half_iterations).map(|i| pick(&BETA, i)).collect(),
        }
    }

    /// The same `alpha`, `beta` for every half-iteration.
    pub fn constant(alpha: f64, beta: f64, half_iterations: usize) -> Self {
        Self {
            alpha: vec![alpha; half_iterations],
            beta: vec![beta; half_iterations],
        }
    }

    pub fn validate(&self, half_iterations: usize) -> Result<(), Error> {
        if self.alpha.len() < half_iterations || self.beta.len() < half_iterations {
            return Err(Error::InvalidParameter(format!(
                "coefficient schedule shorter than {half_iterations} half-iterations"
            )));
        }
        let positive = |v: &[f64]| v.iter().all(|&x| x > 0.0 && x.is_finite());
        if !positive(&self.alpha) || !positive(&self.beta) {
            return Err(Error::InvalidParameter(
                "Chase-Pyndiah coefficients must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Scratch space for the list-sum computations, reusable across words.
#[derive(Clone, Debug, Default)]
pub struct SoftWorkspace {
    /// `exp(PM_min - PM_j)` per candidate.
    weight: Vec<f64>,
    /// For each position, a bitset over candidates that flip it.
    members: Vec<u64>,
    touched: Vec<u16>,
    words_per_pos: usize,
    pm_min: f64,
}

/// Log-sums of candidate weights for one position, split by bit value.
#[derive(Clone, Copy, Debug)]
struct Split {
    zero: f64,
    one: f64,
}

impl SoftWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Indexes the candidates by position and computes their weights.
    /// Returns `ln sum_j exp(-PM_j)` (negative infinity for an empty list).
    fn prepare(&mut self, list: &CandidateList) -> f64 {
        let n = list.n();
        let count = list.len();
        let wpp = count.div_ceil(64).max(1);
        if wpp != self.words_per_pos || self.members.len() != n * wpp {
            self.words_per_pos = wpp;
            self.members.clear();
            self.members.resize(n * wpp, 0);
        } else {
            for &i in &self.touched {
                let i = i as usize;
                self.members[i * wpp..(i + 1) * wpp].fill(0);
            }
        }
        self.touched.clear();
        self.weight.clear();
        if count == 0 {
            self.pm_min = f64::INFINITY;
            return f64::NEG_INFINITY;
        }
        self.pm_min = list.iter().map(|c| c.path_metric).fold(f64::INFINITY, f64::min);
        let mut total = 0.0;
        for (j, cand) in list.iter().enumerate() {
            let w = (self.pm_min - cand.path_metric).exp();
            self.weight.push(w);
            total += w;
            for &i in cand.flips {
                if self.members_row_empty(i as usize) {
                    self.touched.push(i);
                }
                self.members[i as usize * wpp + j / 64] |= 1 << (j % 64);
            }
        }
        -self.pm_min + total.ln()
    }

    fn members_row_empty(&self, i: usize) -> bool {
        self.members[i * self.words_per_pos..(i + 1) * self.words_per_pos]
            .iter()
            .all(|&w| w == 0)
    }

    #[inline]
    fn is_member(&self, i: usize, j: usize) -> bool {
        self.members[i * self.words_per_pos + j / 64] >> (j % 64) & 1 == 1
    }

    /// Log-sum of `exp(-PM)` over candidates with bit i = 0 and bit i = 1,
    /// for a position some candidate flips.
    fn split(&self, list: &CandidateList, i: usize) -> Split {
        let mut flip = 0.0;
        let mut keep = 0.0;
        let mut flip_count = 0;
        let mut keep_count = 0;
        for (j, &w) in self.weight.iter().enumerate() {
            if self.is_member(i, j) {
                flip += w;
                flip_count += 1;
            } else {
                keep += w;
                keep_count += 1;
            }
        }
        let pm_min = self.pm_min;
        let log_sum = |sum: f64, count: usize, flipped: bool| -> f64 {
            if count == 0 {
                f64::NEG_INFINITY
            } else if sum > 0.0 {
                -pm_min + sum.ln()
            } else {
                // every weight underflowed; accumulate exactly in the log domain
                let mut acc = f64::NEG_INFINITY;
                for (j, c) in list.iter().enumerate() {
                    if self.is_member(i, j) == flipped {
                        acc = max_star(acc, -c.path_metric);
                    }
                }
                acc
            }
        };
        let flip_sum = log_sum(flip, flip_count, true);
        let keep_sum = log_sum(keep, keep_count, false);
        if list.hard_decision()[i] == 0 {
            Split {
                zero: keep_sum,
                one: flip_sum,
            }
        } else {
            Split {
                zero: flip_sum,
                one: keep_sum,
            }
        }
    }
}

/// Iteration-independent soft output with weighting coefficient gamma.
///
/// ```text
/// app_i = ln( sum_{c_i = 0} e^{-PM(c)} + gamma sigma(l_i) )
///       - ln( sum_{c_i = 1} e^{-PM(c)} + gamma sigma(-l_i) )
/// ```
pub fn proposed_soft_output(list: &CandidateList, l: &[f64], gamma: f64) -> SoftOutput {
    let mut out = SoftOutput::new(l.len());
    proposed_soft_output_into(list, l, gamma.ln(), &mut SoftWorkspace::new(), &mut out);
    out
}

/// [`proposed_soft_output`] with `ln(gamma)` precomputed and reusable buffers.
pub fn proposed_soft_output_into(
    list: &CandidateList,
    l: &[f64],
    ln_gamma: f64,
    ws: &mut SoftWorkspace,
    out: &mut SoftOutput,
) {
    let n = l.len();
    out.reset(n);
    if list.is_empty() {
        // only the gamma terms remain, which reproduce the input exactly
        out.app.copy_from_slice(l);
        return;
    }
    assert_eq!(list.n(), n, "list and LLR lengths differ");
    let total = ws.prepare(list);
    let hard = list.hard_decision();
    for i in 0..n {
        // softplus(l) and softplus(-l) share ln(1 + exp(-|l|))
        let e = (-l[i].abs()).exp().ln_1p();
        let (sp_pos, sp_neg) = if l[i] > 0.0 { (l[i] + e, e) } else { (e, -l[i] + e) };
        let g0 = ln_gamma - sp_neg;
        let g1 = ln_gamma - sp_pos;
        out.app[i] = if ws.members_row_empty(i) {
            if hard[i] == 0 {
                max_star_fast(total, g0) - g1
            } else {
                g0 - max_star_fast(total, g1)
            }
        } else {
            let s = ws.split(list, i);
            max_star_fast(s.zero, g0) - max_star_fast(s.one, g1)
        };
        out.extrinsic[i] = out.app[i] - l[i];
    }
}

fn check_nonempty(list: &CandidateList) -> Result<(), Error> {
    if list.is_empty() {
        Err(Error::EmptyList)
    } else {
        Ok(())
    }
}

/// Marks position i saturated with the symbol every candidate agrees on.
#[inline]
fn saturate(out: &mut SoftOutput, i: usize, agreed_bit: u8) {
    let x = if agreed_bit == 0 { 1.0 } else { -1.0 };
    out.app[i] = x;
    out.extrinsic[i] = x;
    out.saturated[i] = true;
}

/// Max-approximation soft output over candidate correlations:
/// `app_i = (max_{c_i=0} <x, l> - max_{c_i=1} <x, l>) / 2`.
pub fn pyndiah_raw(list: &CandidateList, l: &[f64]) -> Result<SoftOutput, Error> {
    let mut out = SoftOutput::new(l.len());
    pyndiah_raw_into(list, l, &mut out)?;
    Ok(out)
}

pub fn pyndiah_raw_into(list: &CandidateList, l: &[f64], out: &mut SoftOutput) -> Result<(), Error> {
    check_nonempty(list)?;
    let n = l.len();
    assert_eq!(list.n(), n, "list and LLR lengths differ");
    out.reset(n);
    let hard = list.hard_decision();
    let full: f64 = l.iter().map(|x| x.abs()).sum();
    // <x, l> of each candidate: the hard word correlates to sum |l_i| and
    // every flipped position costs 2 |l_i|.
    let corr: Vec<f64> = list
        .iter()
        .map(|c| full - 2.0 * c.flips.iter().map(|&i| l[i as usize].abs()).sum::<f64>())
        .collect();

    // best correlation among candidates flipping each position
    let mut best_flip = vec![f64::NEG_INFINITY; n];
    let mut flip_count = vec![0usize; n];
    for (j, c) in list.iter().enumerate() {
        for &i in c.flips {
            let i = i as usize;
            best_flip[i] = best_flip[i].max(corr[j]);
            flip_count[i] += 1;
        }
    }
    for i in 0..n {
        if flip_count[i] == 0 {
            saturate(out, i, hard[i]);
            continue;
        }
        if flip_count[i] == list.len() {
            saturate(out, i, hard[i] ^ 1);
            continue;
        }
        let keep = list
            .iter()
            .zip(&corr)
            .filter(|(c, _)| c.flips.binary_search(&(i as u16)).is_err())
            .map(|(_, &v)| v)
            .fold(f64::NEG_INFINITY, f64::max);
        let (zero, one) = if hard[i] == 0 {
            (keep, best_flip[i])
        } else {
            (best_flip[i], keep)
        };
        out.app[i] = 0.5 * (zero - one);
        out.extrinsic[i] = out.app[i] - l[i];
    }
    Ok(())
}

/// Like [`pyndiah_raw`] but with the maxima replaced by full log-sums of
/// `exp(-PM)`.
pub fn pyndiah_like_raw(list: &CandidateList, l: &[f64]) -> Result<SoftOutput, Error> {
    let mut out = SoftOutput::new(l.len());
    pyndiah_like_raw_into(list, l, &mut SoftWorkspace::new(), &mut out)?;
    Ok(out)
}

pub fn pyndiah_like_raw_into(
    list: &CandidateList,
    l: &[f64],
    ws: &mut SoftWorkspace,
    out: &mut SoftOutput,
) -> Result<(), Error> {
    check_nonempty(list)?;
    let n = l.len();
    assert_eq!(list.n(), n, "list and LLR lengths differ");
    out.reset(n);
    ws.prepare(list);
    let hard = list.hard_decision();
    for i in 0..n {
        if ws.members_row_empty(i) {
            saturate(out, i, hard[i]);
            continue;
        }
        let s = ws.split(list, i);
        if s.zero == f64::NEG_INFINITY {
            saturate(out, i, 1);
        } else if s.one == f64::NEG_INFINITY {
            saturate(out, i, 0);
        } else {
            out.app[i] = s.zero - s.one;
            out.extrinsic[i] = out.app[i] - l[i];
        }
    }
    Ok(())
}

/// Exact log-APP ratios by enumerating the whole codebook:
/// `ln( sum_{c_i=0} e^{-PM(c)} / sum_{c_i=1} e^{-PM(c)} )`.
pub fn exact_app(spec: &CodeSpec, l: &[f64]) -> Result<Vec<f64>, Error> {
    let k = spec.k();
    if k > MAX_ORACLE_DIMENSION {
        return Err(Error::CodebookTooLarge { k });
    }
    let n = spec.n();
    if l.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: l.len(),
        });
    }
    let mut num = vec![f64::NEG_INFINITY; n];
    let mut den = vec![f64::NEG_INFINITY; n];
    let mut msg = vec![0u8; k];
    let mut word = vec![0u8; n];
    for v in 0..1u64 << k {
        for (j, m) in msg.iter_mut().enumerate() {
            *m = (v >> j & 1) as u8;
        }
        spec.encode_into(&msg, &mut word);
        // direct evaluation of sum_i ln(1 + exp(-x_i l_i))
        let pm: f64 = word
            .iter()
            .zip(l)
            .map(|(&c, &x)| softplus(if c == 0 { -x } else { x }))
            .sum();
        for i in 0..n {
            if word[i] == 0 {
                num[i] = max_star(num[i], -pm);
            } else {
                den[i] = max_star(den[i], -pm);
            }
        }
    }
    Ok(num.iter().zip(&den).map(|(a, b)| a - b).collect())
}
