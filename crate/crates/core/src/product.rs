//! Product codes: encoding and iterative row/column soft decoding.
//!
//! Arrays are n x n, row-major. A half-iteration decodes every row (or every
//! column) as a constituent word. Extrinsic values are stored per
//! orientation: a row half-iteration reads `extrinsic_cols` as a-priori
//! information and writes only `extrinsic_rows`, and vice versa.

use crate::chase::{chase2_list, hard_bit, CandidateList};
use crate::ebch::CodeSpec;
use crate::softout::{
    proposed_soft_output_into, pyndiah_like_raw_into, pyndiah_raw_into, PyndiahCoefficients, SoftOutput, SoftWorkspace,
};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Rows,
    Cols,
}

impl Orientation {
    pub fn other(self) -> Self {
        match self {
            Orientation::Rows => Orientation::Cols,
            Orientation::Cols => Orientation::Rows,
        }
    }

    /// Orientation of half-iteration `ell`, starting with rows.
    pub fn of_half_iteration(ell: usize) -> Self {
        if ell.is_multiple_of(2) {
            Orientation::Rows
        } else {
            Orientation::Cols
        }
    }
}

/// Which Chase-Pyndiah flavour to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PyndiahVariant {
    /// Max-approximation with the whole-array normalization and scaled
    /// channel LLRs.
    Classic,
    /// Full list sums, no normalization terms.
    Like,
}

/// Soft-output rule used by the iterative decoders.
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    Proposed { gamma: f64 },
    Pyndiah(PyndiahCoefficients),
    PyndiahLike(PyndiahCoefficients),
}

impl Rule {
    pub fn validate(&self, half_iterations: usize) -> Result<(), Error> {
        match self {
            Rule::Proposed { gamma } => {
                if *gamma > 0.0 && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")))
                }
            }
            Rule::Pyndiah(c) | Rule::PyndiahLike(c) => c.validate(half_iterations),
        }
    }
}

/// Channel LLRs of one product word and the extrinsic state of both
/// orientations.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrPlane {
    n: usize,
    pub channel: Vec<f64>,
    pub extrinsic_rows: Vec<f64>,
    pub extrinsic_cols: Vec<f64>,
}

impl LlrPlane {
    pub fn new(n: usize, channel: Vec<f64>) -> Self {
        assert_eq!(channel.len(), n * n, "channel plane must be n x n");
        Self {
            n,
            channel,
            extrinsic_rows: vec![0.0; n * n],
            extrinsic_cols: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extrinsic(&self, orientation: Orientation) -> &[f64] {
        match orientation {
            Orientation::Rows => &self.extrinsic_rows,
            Orientation::Cols => &self.extrinsic_cols,
        }
    }

    /// Mean of `|l^ch|` over the whole array.
    pub fn mean_abs_channel(&self) -> f64 {
        self.channel.iter().map(|x| x.abs()).sum::<f64>() / self.channel.len() as f64
    }
}

#[inline]
fn index(n: usize, orientation: Orientation, word: usize, pos: usize) -> usize {
    match orientation {
        Orientation::Rows => word * n + pos,
        Orientation::Cols => pos * n + word,
    }
}

/// Encodes a k x k information array: rows first, then every column.
pub fn encode_product(spec: &CodeSpec, info: &[u8]) -> Vec<u8> {
    let (n, k) = (spec.n(), spec.k());
    assert_eq!(info.len(), k * k, "information array must be k x k");
    let mut out = vec![0u8; n * n];
    for r in 0..k {
        spec.encode_into(&info[r * k..(r + 1) * k], &mut out[r * n..(r + 1) * n]);
    }
    let mut msg = vec![0u8; k];
    let mut col = vec![0u8; n];
    for c in 0..n {
        for r in 0..k {
            msg[r] = out[r * n + c];
        }
        spec.encode_into(&msg, &mut col);
        for r in k..n {
            out[r * n + c] = col[r];
        }
    }
    out
}

/// Iterative decoder for one product code configuration.
#[derive(Clone, Debug)]
pub struct ProductDecoder {
    spec: CodeSpec,
    p: usize,
    rule: Rule,
}

/// Scratch buffers for one decoding call.
struct Scratch {
    input: Vec<f64>,
    out: SoftOutput,
    ws: SoftWorkspace,
    word: Vec<u8>,
    /// Raw Pyndiah outputs of a whole half-iteration before scaling.
    raw: Vec<f64>,
    saturated: Vec<bool>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            input: vec![0.0; n],
            out: SoftOutput::new(n),
            ws: SoftWorkspace::new(),
            word: vec![0; n],
            raw: vec![0.0; n * n],
            saturated: vec![false; n * n],
        }
    }
}

impl ProductDecoder {
    pub fn new(spec: CodeSpec, p: usize, rule: Rule) -> Self {
        Self { spec, p, rule }
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// Runs `iterations` full iterations (rows then columns) and returns the
    /// n x n hard decisions taken from the ML candidates of the final
    /// half-iteration.
    pub fn decode(&self, plane: &mut LlrPlane, iterations: usize) -> Result<Vec<u8>, Error> {
        if iterations == 0 {
            return Err(Error::InvalidParameter("at least one iteration is required".into()));
        }
        let half_iterations = 2 * iterations;
        self.rule.validate(half_iterations)?;
        let n = self.spec.n();
        let mut scratch = Scratch::new(n);
        let mut decisions = vec![0u8; n * n];
        for ell in 0..half_iterations {
            let last = ell + 1 == half_iterations;
            self.half_iteration_with(
                plane,
                Orientation::of_half_iteration(ell),
                ell,
                &mut scratch,
                last.then_some(&mut decisions[..]),
            );
        }
        Ok(decisions)
    }

    /// One half-iteration `ell` in the given orientation.
    pub fn half_iteration(&self, plane: &mut LlrPlane, orientation: Orientation, ell: usize) -> Result<(), Error> {
        self.rule.validate(ell + 1)?;
        let mut scratch = Scratch::new(self.spec.n());
        self.half_iteration_with(plane, orientation, ell, &mut scratch, None);
        Ok(())
    }

    fn half_iteration_with(
        &self,
        plane: &mut LlrPlane,
        orientation: Orientation,
        ell: usize,
        s: &mut Scratch,
        mut decisions: Option<&mut [u8]>,
    ) {
        let n = self.spec.n();
        assert_eq!(plane.n, n, "plane size does not match the code");
        let channel_scale = match self.rule {
            Rule::Pyndiah(_) => 1.0 / plane.mean_abs_channel(),
            _ => 1.0,
        };
        let ln_gamma = match self.rule {
            Rule::Proposed { gamma } => gamma.ln(),
            _ => 0.0,
        };

        for w in 0..n {
            {
                let apriori = plane.extrinsic(orientation.other());
                for i in 0..n {
                    let at = index(n, orientation, w, i);
                    s.input[i] = channel_scale * plane.channel[at] + apriori[at];
                }
            }
            let list = chase2_list(&self.spec, &s.input, self.p);

            match &self.rule {
                Rule::Proposed { .. } => {
                    proposed_soft_output_into(&list, &s.input, ln_gamma, &mut s.ws, &mut s.out);
                    let target = match orientation {
                        Orientation::Rows => &mut plane.extrinsic_rows,
                        Orientation::Cols => &mut plane.extrinsic_cols,
                    };
                    for i in 0..n {
                        target[index(n, orientation, w, i)] = s.out.extrinsic[i];
                    }
                }
                Rule::Pyndiah(_) | Rule::PyndiahLike(_) => {
                    let variant = if matches!(self.rule, Rule::Pyndiah(_)) {
                        PyndiahVariant::Classic
                    } else {
                        PyndiahVariant::Like
                    };
                    raw_pyndiah(&list, &s.input, variant, &mut s.ws, &mut s.out);
                    for i in 0..n {
                        let at = index(n, orientation, w, i);
                        s.raw[at] = s.out.extrinsic[i];
                        s.saturated[at] = s.out.saturated[i];
                    }
                }
            }

            if let Some(dec) = decisions.as_deref_mut() {
                ml_decision(&list, &s.input, &mut s.word);
                for i in 0..n {
                    dec[index(n, orientation, w, i)] = s.word[i];
                }
            }
        }

        if let Rule::Pyndiah(c) | Rule::PyndiahLike(c) = &self.rule {
            let (alpha, beta) = (c.alpha[ell], c.beta[ell]);
            let scale = match self.rule {
                Rule::Pyndiah(_) => alpha / pyndiah_normalizer(&s.raw, &s.saturated),
                _ => alpha,
            };
            let target = match orientation {
                Orientation::Rows => &mut plane.extrinsic_rows,
                Orientation::Cols => &mut plane.extrinsic_cols,
            };
            for ((t, &d), &sat) in target.iter_mut().zip(&s.raw).zip(&s.saturated) {
                *t = if sat { scale * beta * d } else { scale * d };
            }
        }
    }
}

/// Raw Chase-Pyndiah output for one word. An empty list carries no
/// information, so every position is treated as saturated on the input sign.
fn raw_pyndiah(list: &CandidateList, l: &[f64], variant: PyndiahVariant, ws: &mut SoftWorkspace, out: &mut SoftOutput) {
    if list.is_empty() {
        out.app.clear();
        out.extrinsic.clear();
        out.saturated.clear();
        for &x in l {
            let sign = if hard_bit(x) == 0 { 1.0 } else { -1.0 };
            out.app.push(sign);
            out.extrinsic.push(sign);
            out.saturated.push(true);
        }
        return;
    }
    let res = match variant {
        PyndiahVariant::Classic => pyndiah_raw_into(list, l, out),
        PyndiahVariant::Like => pyndiah_like_raw_into(list, l, ws, out),
    };
    res.expect("list is nonempty");
}

/// Mean `|app - l|` over the non-saturated positions of a whole half-iteration,
/// or 1 when every position is saturated.
pub fn pyndiah_normalizer(raw: &[f64], saturated: &[bool]) -> f64 {
    let (sum, count) = raw
        .iter()
        .zip(saturated)
        .filter(|(_, &s)| !s)
        .fold((0.0, 0usize), |(s, c), (&d, _)| (s + d.abs(), c + 1));
    if count == 0 || sum == 0.0 {
        1.0
    } else {
        sum / count as f64
    }
}

/// ML codeword of the list, or the hard decision of `l` if the list is empty.
pub fn ml_decision(list: &CandidateList, l: &[f64], out: &mut [u8]) {
    match list.best() {
        Some(best) => list.codeword_into(best, out),
        None => {
            for (o, &x) in out.iter_mut().zip(l) {
                *o = hard_bit(x);
            }
        }
    }
}

/// One half-iteration of the gamma rule.
pub fn half_iteration_proposed(
    plane: &mut LlrPlane,
    orientation: Orientation,
    spec: &CodeSpec,
    p: usize,
    gamma: f64,
) -> Result<(), Error> {
    ProductDecoder::new(spec.clone(), p, Rule::Proposed { gamma }).half_iteration(plane, orientation, 0)
}

/// One half-iteration `ell` of Chase-Pyndiah decoding.
pub fn half_iteration_pyndiah(
    plane: &mut LlrPlane,
    orientation: Orientation,
    spec: &CodeSpec,
    p: usize,
    coeffs: &PyndiahCoefficients,
    ell: usize,
    variant: PyndiahVariant,
) -> Result<(), Error> {
    let rule = match variant {
        PyndiahVariant::Classic => Rule::Pyndiah(coeffs.clone()),
        PyndiahVariant::Like => Rule::PyndiahLike(coeffs.clone()),
    };
    ProductDecoder::new(spec.clone(), p, rule).half_iteration(plane, orientation, ell)
}

/// Full iterative decoding; see [`ProductDecoder::decode`].
pub fn decode_product(
    plane: &mut LlrPlane,
    spec: &CodeSpec,
    p: usize,
    rule: &Rule,
    iterations: usize,
) -> Result<Vec<u8>, Error> {
    ProductDecoder::new(spec.clone(), p, rule.clone()).decode(plane, iterations)
}

/// Extracts the k x k information part of an n x n array.
pub fn info_part(spec: &CodeSpec, array: &[u8]) -> Vec<u8> {
    let (n, k) = (spec.n(), spec.k());
    (0..k).flat_map(|r| array[r * n..r * n + k].iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bpsk;

    fn noiseless(word: &[u8], mag: f64) -> Vec<f64> {
        word.iter().map(|&b| mag * bpsk(b)).collect()
    }

    fn rows_and_cols_valid(spec: &CodeSpec, arr: &[u8]) -> bool {
        let n = spec.n();
        (0..n).all(|r| spec.is_codeword(&arr[r * n..(r + 1) * n]))
            && (0..n).all(|c| {
                let col: Vec<u8> = (0..n).map(|r| arr[r * n + c]).collect();
                spec.is_codeword(&col)
            })
    }

    #[test]
    fn zero_info_gives_zero_array() {
        let spec = CodeSpec::new(3, 1).unwrap();
        assert!(encode_product(&spec, &[0; 16]).iter().all(|&b| b == 0));
    }

    #[test]
    fn all_8_4_squared_encodings_are_valid() {
        let spec = CodeSpec::new(3, 1).unwrap();
        // 16 bits of information: exhaust all 2^16 would be slow-ish; the
        // 256 patterns below cover every row pair combination.
        for a in 0..16u32 {
            for b in 0..16u32 {
                let info: Vec<u8> = (0..16)
                    .map(|i| {
                        let v = if (i / 4) % 2 == 0 { a } else { b };
                        ((v >> (i % 4)) & 1) as u8
                    })
                    .collect();
                let arr = encode_product(&spec, &info);
                assert!(rows_and_cols_valid(&spec, &arr));
                assert_eq!(info_part(&spec, &arr), info);
            }
        }
    }

    #[test]
    fn product_rate() {
        let spec = CodeSpec::new(8, 2).unwrap();
        let rate = (spec.k() * spec.k()) as f64 / (spec.n() * spec.n()) as f64;
        assert!((rate - 0.8716).abs() < 1e-4);
    }

    #[test]
    fn row_half_iteration_leaves_columns_untouched() {
        let spec = CodeSpec::new(4, 2).unwrap();
        let n = spec.n();
        let info: Vec<u8> = (0..spec.k() * spec.k()).map(|i| (i % 3 == 0) as u8).collect();
        let arr = encode_product(&spec, &info);
        let mut ch = noiseless(&arr, 2.0);
        ch[5] = -ch[5];
        let mut plane = LlrPlane::new(n, ch);
        plane.extrinsic_cols[7] = 0.75;
        let before = plane.extrinsic_cols.clone();
        half_iteration_proposed(&mut plane, Orientation::Rows, &spec, 3, 2f64.powi(-17)).unwrap();
        assert_eq!(plane.extrinsic_cols, before);
        assert!(plane.extrinsic_rows.iter().any(|&e| e != 0.0));
    }

    #[test]
    fn noiseless_extrinsic_reinforces_signs() {
        let spec = CodeSpec::new(4, 1).unwrap();
        let n = spec.n();
        let info: Vec<u8> = (0..spec.k() * spec.k()).map(|i| (i % 5 == 1) as u8).collect();
        let arr = encode_product(&spec, &info);
        let mut plane = LlrPlane::new(n, noiseless(&arr, 30.0));
        half_iteration_proposed(&mut plane, Orientation::Rows, &spec, 4, 2f64.powi(-17)).unwrap();
        for (e, &b) in plane.extrinsic_rows.iter().zip(&arr) {
            assert!(e * bpsk(b) > 0.0);
        }
    }

    #[test]
    fn single_error_corrected_in_one_iteration() {
        let spec = CodeSpec::new(3, 1).unwrap();
        let info: Vec<u8> = vec![1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0, 0];
        let arr = encode_product(&spec, &info);
        let mut ch = noiseless(&arr, 4.0);
        ch[19] = -ch[19] * 0.5;
        for rule in [
            Rule::Proposed { gamma: 2f64.powi(-17) },
            Rule::Pyndiah(PyndiahCoefficients::classic(2)),
            Rule::PyndiahLike(PyndiahCoefficients::constant(0.4, 3.6, 2)),
        ] {
            let mut plane = LlrPlane::new(8, ch.clone());
            let dec = decode_product(&mut plane, &spec, 2, &rule, 1).unwrap();
            assert_eq!(dec, arr, "{rule:?}");
        }
    }

    #[test]
    fn decisions_are_codewords_and_deterministic() {
        let spec = CodeSpec::new(5, 2).unwrap();
        let n = spec.n();
        let info: Vec<u8> = (0..spec.k() * spec.k()).map(|i| ((i * 13) % 7 < 3) as u8).collect();
        let arr = encode_product(&spec, &info);
        let mut ch = noiseless(&arr, 1.5);
        for i in (0..n * n).step_by(37) {
            ch[i] = -ch[i] * 0.3;
        }
        let rule = Rule::Proposed { gamma: 2f64.powi(-17) };
        let mut a = LlrPlane::new(n, ch.clone());
        let mut b = LlrPlane::new(n, ch);
        let da = decode_product(&mut a, &spec, 4, &rule, 2).unwrap();
        let db = decode_product(&mut b, &spec, 4, &rule, 2).unwrap();
        assert_eq!(da, db);
        assert_eq!(a, b);
        // last half-iteration is on columns
        for c in 0..n {
            let col: Vec<u8> = (0..n).map(|r| da[r * n + c]).collect();
            let l: Vec<f64> = (0..n)
                .map(|r| a.channel[r * n + c] + a.extrinsic_rows[r * n + c])
                .collect();
            if !chase2_list(&spec, &l, 4).is_empty() {
                assert!(spec.is_codeword(&col));
            }
        }
    }

    #[test]
    fn pyndiah_all_saturated_path() {
        // noiseless input: every list is a single candidate, every bit saturated
        let spec = CodeSpec::new(4, 2).unwrap();
        let n = spec.n();
        let arr = encode_product(&spec, &vec![0; spec.k() * spec.k()]);
        let mut plane = LlrPlane::new(n, noiseless(&arr, 50.0));
        let coeffs = PyndiahCoefficients::classic(2);
        half_iteration_pyndiah(
            &mut plane,
            Orientation::Rows,
            &spec,
            1,
            &coeffs,
            0,
            PyndiahVariant::Classic,
        )
        .unwrap();
        // p = 1 gives the hard word and one flipped neighbour which the
        // decoder maps back, so all candidates coincide: |J| = 0, normalizer 1
        for &e in &plane.extrinsic_rows {
            assert!((e - 0.2 * 0.2).abs() < 1e-12, "{e}");
        }
    }

    #[test]
    fn like_variant_constant_coefficients() {
        let spec = CodeSpec::new(4, 2).unwrap();
        let n = spec.n();
        let arr = encode_product(&spec, &vec![0; spec.k() * spec.k()]);
        let mut plane = LlrPlane::new(n, noiseless(&arr, 50.0));
        let coeffs = PyndiahCoefficients::constant(0.4, 3.6, 2);
        half_iteration_pyndiah(
            &mut plane,
            Orientation::Cols,
            &spec,
            1,
            &coeffs,
            1,
            PyndiahVariant::Like,
        )
        .unwrap();
        for &e in &plane.extrinsic_cols {
            assert!((e - 0.4 * 3.6).abs() < 1e-12);
        }
        assert!(plane.extrinsic_rows.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn channel_normalization() {
        let plane = LlrPlane::new(2, vec![3.0, -3.0, 3.0, -3.0]);
        assert_eq!(plane.mean_abs_channel(), 3.0);
        assert_eq!(pyndiah_normalizer(&[1.0, -3.0, 9.0], &[false, false, true]), 2.0);
        assert_eq!(pyndiah_normalizer(&[1.0], &[true]), 1.0);
    }

    #[test]
    fn zero_iterations_rejected() {
        let spec = CodeSpec::new(3, 1).unwrap();
        let mut plane = LlrPlane::new(8, vec![1.0; 64]);
        let rule = Rule::Proposed { gamma: 1.0 };
        assert!(decode_product(&mut plane, &spec, 2, &rule, 0).is_err());
        let bad = Rule::Proposed { gamma: -1.0 };
        assert!(decode_product(&mut plane, &spec, 2, &bad, 1).is_err());
    }
}
