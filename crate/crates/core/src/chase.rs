//! Chase-II list decoding of a single constituent word.
//!
//! Candidates are stored relative to the hard decision of the input LLRs:
//! each one is the sorted set of positions where it differs from that hard
//! word. This keeps lists small and makes path metrics cheap, since
//!
//! ```text
//! PM(c, l) = sum_i ln(1 + exp(-x_i l_i))
//!          = sum_i ln(1 + exp(-|l_i|)) + sum_{i : c_i != hard_i} |l_i|.
//! ```

use crate::ebch::{CodeSpec, Correction, HardWord};

/// Default number of least-reliable positions flipped (32 test patterns).
pub const DEFAULT_FLIP_POSITIONS: usize = 5;

/// Numerically stable `ln(1 + e^z)`.
#[inline]
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Hard decision of one LLR: `l >= 0` maps to bit 0.
#[inline]
pub fn hard_bit(l: f64) -> u8 {
    (l < 0.0) as u8
}

pub fn hard_decision(l: &[f64]) -> Vec<u8> {
    l.iter().map(|&x| hard_bit(x)).collect()
}

/// Path metric of the hard decision of `l` (every term agrees in sign).
fn base_metric(l: &[f64]) -> f64 {
    l.iter().map(|&x| softplus(-x.abs())).sum()
}

/// Path metric `sum_i ln(1 + exp(-x_i l_i))` with `x_i = (-1)^(c_i)`.
///
/// Evaluated as the metric of the hard decision plus `|l_i|` for every
/// disagreeing position, in ascending position order, which is the same
/// arithmetic [`chase2_list`] uses so the two agree bit for bit.
pub fn path_metric(word: &[u8], l: &[f64]) -> f64 {
    assert_eq!(word.len(), l.len(), "word and LLR lengths differ");
    let mut pm = base_metric(l);
    for (&c, &x) in word.iter().zip(l) {
        if c != hard_bit(x) {
            pm += x.abs();
        }
    }
    pm
}

/// Correlation `<x, l>` of the BPSK image of `word` with `l`.
pub fn correlation(word: &[u8], l: &[f64]) -> f64 {
    word.iter().zip(l).map(|(&c, &x)| if c == 0 { x } else { -x }).sum()
}

/// Indices of the `p` smallest `|l_i|`, ties broken by lower index, returned
/// in ascending order of reliability.
pub fn least_reliable_positions(l: &[f64], p: usize) -> Vec<usize> {
    let p = p.min(l.len());
    let mut idx: Vec<usize> = (0..l.len()).collect();
    let key = |&i: &usize| (l[i].abs(), i);
    if p < l.len() {
        idx.select_nth_unstable_by(p, |a, b| key(a).partial_cmp(&key(b)).unwrap());
        idx.truncate(p);
    }
    idx.sort_unstable_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    idx
}

/// One list entry: a span into the shared flip buffer and its path metric.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Entry {
    start: u32,
    len: u32,
    metric: f64,
    /// Fingerprint of the flip set, compared before the flips themselves.
    key: u64,
}

fn flip_key(flips: &[u16]) -> u64 {
    flips.iter().fold(flips.len() as u64, |h, &f| {
        (h ^ (f as u64 + 1)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    })
}

/// Distinct codewords found by Chase-II decoding, each with its path metric.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateList {
    hard: Vec<u8>,
    flips: Vec<u16>,
    entries: Vec<Entry>,
    p: usize,
}

/// Borrowed view of one candidate.
#[derive(Clone, Copy, Debug)]
pub struct Candidate<'a> {
    /// Sorted positions where the candidate differs from the hard decision.
    pub flips: &'a [u16],
    pub path_metric: f64,
}

impl CandidateList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of flip positions used to generate the list.
    pub fn flip_positions(&self) -> usize {
        self.p
    }

    /// Hard decision of the input LLRs the list is relative to.
    pub fn hard_decision(&self) -> &[u8] {
        &self.hard
    }

    pub fn n(&self) -> usize {
        self.hard.len()
    }

    pub fn get(&self, i: usize) -> Candidate<'_> {
        let e = self.entries[i];
        Candidate {
            flips: &self.flips[e.start as usize..(e.start + e.len) as usize],
            path_metric: e.metric,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Candidate<'_>> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Materializes candidate `i` as a full codeword.
    pub fn codeword(&self, i: usize) -> HardWord {
        let mut bits = self.hard.clone();
        for &j in self.get(i).flips {
            bits[j as usize] ^= 1;
        }
        HardWord(bits)
    }

    /// Writes candidate `i` into `out`.
    pub fn codeword_into(&self, i: usize, out: &mut [u8]) {
        out.copy_from_slice(&self.hard);
        for &j in self.get(i).flips {
            out[j as usize] ^= 1;
        }
    }

    /// Index of the candidate with the smallest path metric (first on ties).
    pub fn best(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in self.entries.iter().enumerate() {
            if best.is_none_or(|(_, m)| e.metric < m) {
                best = Some((i, e.metric));
            }
        }
        best.map(|(i, _)| i)
    }

    fn push_unique(&mut self, flips: &[u16], metric: f64) -> bool {
        let key = flip_key(flips);
        for e in self.entries.iter().filter(|e| e.key == key) {
            let existing = &self.flips[e.start as usize..(e.start + e.len) as usize];
            if existing == flips {
                return false;
            }
        }
        let start = self.flips.len() as u32;
        self.flips.extend_from_slice(flips);
        self.entries.push(Entry {
            start,
            len: flips.len() as u32,
            metric,
            key,
        });
        true
    }

    /// Builds a list from explicit codewords, dropping duplicates. Intended
    /// for oracles and tests; all words must have the length of `l`.
    pub fn from_codewords<'a, I>(words: I, l: &[f64]) -> Self
    where
        I: IntoIterator<Item = &'a HardWord>,
    {
        let hard = hard_decision(l);
        let base = base_metric(l);
        let mut list = CandidateList {
            hard,
            ..Default::default()
        };
        let mut flips = Vec::new();
        for w in words {
            assert_eq!(w.len(), l.len(), "codeword length differs from LLR length");
            flips.clear();
            let mut metric = base;
            for (j, (&c, &h)) in w.0.iter().zip(&list.hard).enumerate() {
                if c != h {
                    flips.push(j as u16);
                    metric += l[j].abs();
                }
            }
            list.push_unique(&flips, metric);
        }
        list
    }
}

/// Chase-II decoding: bounded-distance decode every flip pattern on the `p`
/// least reliable positions of the hard decision, keeping distinct successes.
pub fn chase2_list(spec: &CodeSpec, l: &[f64], p: usize) -> CandidateList {
    let p = p.min(l.len());
    chase2_list_with_order(spec, l, p, 0..1u64 << p)
}

pub(crate) fn chase2_list_with_order<I>(spec: &CodeSpec, l: &[f64], p: usize, patterns: I) -> CandidateList
where
    I: IntoIterator<Item = u64>,
{
    let n = spec.n();
    assert_eq!(l.len(), n, "LLR word length must equal n");
    assert!(p < 64, "at most 63 flip positions are supported");
    let hard = hard_decision(l);
    let base = base_metric(l);
    let (s1, s3) = spec.syndromes(&hard);
    let inner_parity = hard[..n - 1].iter().fold(0u8, |a, &b| a ^ b);
    let lrp = least_reliable_positions(l, p);
    let column: Vec<_> = lrp.iter().map(|&j| spec.column_syndrome(j)).collect();

    let mut list = CandidateList {
        hard,
        p,
        ..Default::default()
    };
    let mut diff: Vec<u16> = Vec::with_capacity(p + 3);
    for mask in patterns {
        let (mut t1, mut t3) = (s1, s3);
        diff.clear();
        for (b, &j) in lrp.iter().enumerate() {
            if mask >> b & 1 == 1 {
                t1 ^= column[b].0;
                t3 ^= column[b].1;
                diff.push(j as u16);
            }
        }
        let Some(correction) = spec.locate(t1, t3) else {
            continue;
        };
        if correction != Correction::None {
            for j in correction.positions() {
                let j = j as u16;
                match diff.iter().position(|&d| d == j) {
                    Some(at) => {
                        diff.swap_remove(at);
                    }
                    None => diff.push(j),
                }
            }
        }
        // The extension bit is recomputed from the corrected inner word.
        diff.retain(|&d| d as usize != n - 1);
        let flips_parity = (inner_parity ^ (diff.len() as u8 & 1)) != list.hard[n - 1];
        if flips_parity {
            diff.push((n - 1) as u16);
        }
        diff.sort_unstable();
        let mut metric = base;
        for &d in &diff {
            metric += l[d as usize].abs();
        }
        list.push_unique(&diff, metric);
    }
    list
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn codebook(spec: &CodeSpec) -> Vec<HardWord> {
        let k = spec.k();
        (0..1u32 << k)
            .map(|v| {
                let msg: Vec<u8> = (0..k).map(|j| ((v >> j) & 1) as u8).collect();
                spec.encode(&msg)
            })
            .collect()
    }

    #[test]
    fn path_metric_examples() {
        let pm = path_metric(&[0; 8], &[0.0; 8]);
        assert!((pm - 8.0 * 2f64.ln()).abs() < 1e-12);
        let pm = path_metric(&[0; 8], &[10.0; 8]);
        assert!((pm - 8.0 * (-10f64).exp().ln_1p()).abs() < 1e-15);
        assert!((pm - 3.632e-4).abs() < 1e-6);
        let pm = path_metric(&[0, 1], &[1.0, 1.0]);
        assert!((pm - 1.626_523_6).abs() < 1e-6, "{pm}");
    }

    #[test]
    fn lrp_examples() {
        assert_eq!(least_reliable_positions(&[5.0, -0.1, 3.0, 0.2], 2), vec![1, 3]);
        assert_eq!(least_reliable_positions(&[1.0, -1.0, 1.0, -1.0], 2), vec![0, 1]);
        let mut all = least_reliable_positions(&[1.0, -2.0, 0.5], 3);
        all.sort();
        assert_eq!(all, vec![0, 1, 2]);
    }

    #[test]
    fn noiseless_word_is_best() {
        let spec = CodeSpec::new(8, 2).unwrap();
        let msg: Vec<u8> = (0..spec.k()).map(|i| (i % 7 < 3) as u8).collect();
        let cw = spec.encode(&msg);
        let l: Vec<f64> = cw.0.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
        let list = chase2_list(&spec, &l, 5);
        let best = list.best().unwrap();
        assert_eq!(list.codeword(best), cw);
        assert!(list.get(best).flips.is_empty());
    }

    #[test]
    fn strong_wrong_sign_corrected_without_flipping() {
        let spec = CodeSpec::new(8, 2).unwrap();
        let msg: Vec<u8> = (0..spec.k()).map(|i| (i % 5 == 0) as u8).collect();
        let cw = spec.encode(&msg);
        let mut l: Vec<f64> =
            cw.0.iter()
                .enumerate()
                .map(|(i, &b)| (1.0 + (i % 9) as f64) * if b == 0 { 1.0 } else { -1.0 })
                .collect();
        l[100] = -l[100] * 3.0;
        let list = chase2_list(&spec, &l, 5);
        assert!((0..list.len()).any(|i| list.codeword(i) == cw));
    }

    #[test]
    fn exhaustive_patterns_on_8_4() {
        let spec = CodeSpec::new(3, 1).unwrap();
        let book = codebook(&spec);
        let l = [2.0, -1.0, 0.5, 3.0, -0.2, 1.0, 1.0, -1.0];
        let list = chase2_list(&spec, &l, 8);
        // every codeword is within distance 1 of some pattern
        assert_eq!(list.len(), 16);
        for i in 0..list.len() {
            let c = list.codeword(i);
            assert!(book.contains(&c));
            assert_eq!(list.get(i).path_metric, path_metric(&c.0, &l));
        }
    }

    #[test]
    fn all_failures_give_empty_list() {
        // S1 = 0, S3 != 0 cannot be solved and p = 0 tries only the hard word.
        let spec = CodeSpec::new(6, 2).unwrap();
        let mut word = [0u8; 64];
        // find a pattern with s1 = 0 and s3 != 0
        'outer: for a in 0..63 {
            for b in a + 1..63 {
                for c in b + 1..63 {
                    let s = |j| spec.column_syndrome(j);
                    let s1 = s(a).0 ^ s(b).0 ^ s(c).0;
                    let s3 = s(a).1 ^ s(b).1 ^ s(c).1;
                    if s1 == 0 && s3 != 0 {
                        word[a] = 1;
                        word[b] = 1;
                        word[c] = 1;
                        break 'outer;
                    }
                }
            }
        }
        let l: Vec<f64> = word.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
        assert!(chase2_list(&spec, &l, 0).is_empty());
    }

    fn llr_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-8.0f64..8.0, n)
    }

    proptest! {
        #[test]
        fn candidates_valid_distinct_and_metric_exact(l in llr_strategy(64), p in 0usize..7) {
            let spec = CodeSpec::new(6, 2).unwrap();
            let list = chase2_list(&spec, &l, p);
            prop_assert!(list.len() <= 1 << p);
            let words: Vec<HardWord> = (0..list.len()).map(|i| list.codeword(i)).collect();
            for (i, w) in words.iter().enumerate() {
                prop_assert!(spec.is_codeword(&w.0));
                prop_assert_eq!(list.get(i).path_metric, path_metric(&w.0, &l));
                for v in &words[..i] {
                    prop_assert_ne!(v, w);
                }
            }
        }

        #[test]
        fn enumeration_order_does_not_change_the_set(l in llr_strategy(64)) {
            let spec = CodeSpec::new(6, 2).unwrap();
            let forward = chase2_list(&spec, &l, 5);
            let backward = chase2_list_with_order(&spec, &l, 5, (0..32u64).rev());
            let mut a: Vec<_> = (0..forward.len()).map(|i| forward.codeword(i)).collect();
            let mut b: Vec<_> = (0..backward.len()).map(|i| backward.codeword(i)).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn metric_correlation_duality(l in llr_strategy(64)) {
            let spec = CodeSpec::new(6, 2).unwrap();
            let list = chase2_list(&spec, &l, 4);
            let offset: f64 = l.iter().map(|&x| (2.0 * (x / 2.0).cosh()).ln()).sum();
            for i in 0..list.len() {
                let w = list.codeword(i);
                let lhs = -list.get(i).path_metric;
                let rhs = correlation(&w.0, &l) / 2.0 - offset;
                prop_assert!((lhs - rhs).abs() < 1e-9, "{} vs {}", lhs, rhs);
            }
        }
    }
}
