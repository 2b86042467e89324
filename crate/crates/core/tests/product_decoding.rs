use fec_core::channel::{substream, AwgnChannel, ChannelParams};
use fec_core::chase::hard_decision;
use fec_core::product::{encode_product, info_part, LlrPlane, ProductDecoder, Rule};
use fec_core::{CodeSpec, PyndiahCoefficients};
use rand::Rng;
use rayon::prelude::*;

struct Frame {
    info: Vec<u8>,
    plane: LlrPlane,
}

fn frame(spec: &CodeSpec, ebn0: f64, seed: u64, index: u64) -> Frame {
    let (n, k) = (spec.n(), spec.k());
    let rate = (k * k) as f64 / (n * n) as f64;
    let mut rng = substream(seed, index);
    let info: Vec<u8> = (0..k * k).map(|_| rng.gen::<bool>() as u8).collect();
    let mut llr = vec![0.0; n * n];
    AwgnChannel::new(ChannelParams::new(ebn0, rate).unwrap()).transmit_into(
        &encode_product(spec, &info),
        &mut llr,
        &mut rng,
    );
    Frame {
        info,
        plane: LlrPlane::new(n, llr),
    }
}

fn errors(spec: &CodeSpec, decided: &[u8], info: &[u8]) -> u64 {
    info_part(spec, decided)
        .iter()
        .zip(info)
        .filter(|(a, b)| a != b)
        .count() as u64
}

/// Mean and standard error of a sample.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn more_iterations_never_raise_the_error_rate() {
    const WORDS: u64 = 100_000;
    let spec = CodeSpec::new(6, 1).unwrap();
    // the gamma term does not depend on the iteration, so decoding one
    // iteration at a time continues a single 4-iteration run
    let decoder = ProductDecoder::new(spec.clone(), 5, Rule::Proposed { gamma: 2f64.powi(-10) });
    let counts: Vec<[u64; 3]> = (0..WORDS)
        .into_par_iter()
        .map(|i| {
            let Frame { info, mut plane } = frame(&spec, 3.0, 0x5EED, i);
            let d1 = decoder.decode(&mut plane, 1).unwrap();
            let d2 = decoder.decode(&mut plane, 1).unwrap();
            let d4 = decoder.decode(&mut plane, 2).unwrap();
            [
                errors(&spec, &d1, &info),
                errors(&spec, &d2, &info),
                errors(&spec, &d4, &info),
            ]
        })
        .collect();
    let bits = (WORDS * 57 * 57) as f64;
    let total: Vec<u64> = (0..3).map(|j| counts.iter().map(|c| c[j]).sum()).collect();
    eprintln!(
        "BER after 1, 2, 4 iterations: {:.3e} {:.3e} {:.3e}",
        total[0] as f64 / bits,
        total[1] as f64 / bits,
        total[2] as f64 / bits
    );
    assert!(total[0] > 0, "operating point is not in the waterfall");
    for (later, earlier) in [(1, 0), (2, 1)] {
        let diff: Vec<f64> = counts.iter().map(|c| c[later] as f64 - c[earlier] as f64).collect();
        let (mean, se) = mean_se(&diff);
        assert!(
            mean - 3.0 * se <= 0.0,
            "errors per word rose significantly: {mean} +- {se}"
        );
    }
}

#[test]
fn iterative_decoding_beats_hard_decisions_for_every_rule() {
    let spec = CodeSpec::new(5, 2).unwrap();
    let rules = [
        Rule::Proposed { gamma: 2f64.powi(-10) },
        Rule::Pyndiah(PyndiahCoefficients::classic(8)),
        Rule::PyndiahLike(PyndiahCoefficients::constant(0.4, 3.6, 8)),
    ];
    for rule in rules {
        let decoder = ProductDecoder::new(spec.clone(), 4, rule.clone());
        let (mut raw, mut decoded) = (0, 0);
        for i in 0..40 {
            let Frame { info, mut plane } = frame(&spec, 3.0, 77, i);
            raw += errors(&spec, &hard_decision(&plane.channel), &info);
            decoded += errors(&spec, &decoder.decode(&mut plane, 4).unwrap(), &info);
        }
        assert!(raw > 100, "{raw}");
        assert!(
            decoded * 10 < raw,
            "{rule:?}: {decoded} errors after decoding, {raw} before"
        );
    }
}

#[test]
fn noiseless_frames_decode_in_one_iteration() {
    let spec = CodeSpec::new(8, 2).unwrap();
    let decoder = ProductDecoder::new(spec.clone(), 5, Rule::Proposed { gamma: 2f64.powi(-17) });
    let Frame { info, mut plane } = frame(&spec, 40.0, 3, 0);
    let decided = decoder.decode(&mut plane, 1).unwrap();
    assert_eq!(info_part(&spec, &decided), info);
}
