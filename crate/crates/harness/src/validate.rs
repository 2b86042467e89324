//! Fast self-checks behind `fecsim validate`: oracle equivalences and
//! structural invariants of the decoders, each reduced to pass/fail.

use fec_core::channel::{bpsk, substream, AwgnChannel, ChannelParams, PolarGaussian};
use fec_core::chase::{chase2_list, correlation, path_metric};
use fec_core::product::encode_product;
use fec_core::softout::{exact_app, proposed_soft_output};
use fec_core::staircase::{encode_staircase, info_bits_per_block};
use fec_core::{CandidateList, CodeSpec, FieldTable, HardWord};
use rand::Rng;

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

fn codebook(spec: &CodeSpec) -> Vec<HardWord> {
    (0..1u32 << spec.k())
        .map(|v| {
            let msg: Vec<u8> = (0..spec.k()).map(|j| ((v >> j) & 1) as u8).collect();
            spec.encode(&msg)
        })
        .collect()
}

fn gaussian_llrs(rng: &mut fec_core::channel::SimRng, n: usize) -> Vec<f64> {
    // sigma^2 = 1: l = 2 (x + noise)
    let mut g = PolarGaussian::new();
    (0..n)
        .map(|_| {
            let x = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            2.0 * (x + g.sample(rng))
        })
        .collect()
}

fn field_tables() -> Result<String, String> {
    for m in 3..=8 {
        let f = FieldTable::new(m).map_err(|e| e.to_string())?;
        for a in 1..f.size() as u16 {
            if f.exp(f.log(a).unwrap()) != a || f.pow(a, f.order() as u64) != 1 {
                return Err(format!("GF(2^{m}) fails at element {a}"));
            }
        }
    }
    Ok("GF(2^3)..GF(2^8)".into())
}

fn bounded_decoding() -> Result<String, String> {
    let small = CodeSpec::new(3, 1).map_err(|e| e.to_string())?;
    for cw in codebook(&small) {
        for j in 0..7 {
            let mut r = cw.clone();
            r.0[j] ^= 1;
            if small.decode_bounded(&r).as_ref() != Some(&cw) {
                return Err(format!("(8,4): flip {j} of {:?} not corrected", cw.0));
            }
        }
    }
    let big = CodeSpec::new(8, 2).map_err(|e| e.to_string())?;
    let mut rng = substream(0xB0C4, 0);
    for trial in 0..1000 {
        let msg: Vec<u8> = (0..big.k()).map(|_| rng.gen::<bool>() as u8).collect();
        let cw = big.encode(&msg);
        let mut r = cw.clone();
        for _ in 0..rng.gen_range(0..=2) {
            let j = rng.gen_range(0..big.n() - 1);
            r.0[j] ^= 1;
        }
        if big.decode_bounded(&r).as_ref() != Some(&cw) {
            return Err(format!("(256,239): trial {trial} not corrected"));
        }
    }
    Ok("(8,4) exhaustive, (256,239) 1000 patterns".into())
}

fn oracle_equivalence() -> Result<String, String> {
    let spec = CodeSpec::new(3, 1).map_err(|e| e.to_string())?;
    let book = codebook(&spec);
    let mut rng = substream(0x0AC1E, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let l = gaussian_llrs(&mut rng, 8);
        let list = CandidateList::from_codewords(&book, &l);
        let out = proposed_soft_output(&list, &l, 1e-300);
        let exact = exact_app(&spec, &l).map_err(|e| e.to_string())?;
        for (a, b) in out.app.iter().zip(&exact) {
            worst = worst.max((a - b).abs());
        }
    }
    if worst < 1e-6 {
        Ok(format!("max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

fn empty_list_identity() -> Result<String, String> {
    let mut rng = substream(0xE3, 0);
    for _ in 0..200 {
        let l = gaussian_llrs(&mut rng, 16);
        let gamma = 10f64.powf(rng.gen_range(-30.0..5.0));
        let out = proposed_soft_output(&CandidateList::default(), &l, gamma);
        if out.extrinsic.iter().any(|&e| e != 0.0) {
            return Err(format!("nonzero extrinsic for gamma {gamma:e}"));
        }
    }
    Ok("extrinsic identically zero".into())
}

fn metric_duality() -> Result<String, String> {
    let spec = CodeSpec::new(6, 2).map_err(|e| e.to_string())?;
    let mut rng = substream(0xD0A1, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let l: Vec<f64> = gaussian_llrs(&mut rng, 64).iter().map(|x| x * 0.5).collect();
        let list = chase2_list(&spec, &l, 5);
        let offset: f64 = l.iter().map(|&x| (2.0 * (x / 2.0).cosh()).ln()).sum();
        let mut best_pm = (f64::INFINITY, 0);
        let mut best_corr = (f64::NEG_INFINITY, 0);
        for i in 0..list.len() {
            let w = list.codeword(i);
            let pm = path_metric(&w.0, &l);
            let corr = correlation(&w.0, &l);
            worst = worst.max((-pm - (corr / 2.0 - offset)).abs());
            if pm < best_pm.0 {
                best_pm = (pm, i);
            }
            if corr > best_corr.0 {
                best_corr = (corr, i);
            }
        }
        if best_pm.1 != best_corr.1 {
            return Err("argmin PM differs from argmax correlation".into());
        }
    }
    if worst < 1e-9 {
        Ok(format!("max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

fn construction_validity() -> Result<String, String> {
    let spec = CodeSpec::new(6, 1).map_err(|e| e.to_string())?;
    let n = spec.n();
    let mut rng = substream(0xC0DE, 0);
    for _ in 0..10 {
        let info: Vec<u8> = (0..spec.k() * spec.k()).map(|_| rng.gen::<bool>() as u8).collect();
        let arr = encode_product(&spec, &info);
        for r in 0..n {
            let row = &arr[r * n..(r + 1) * n];
            let col: Vec<u8> = (0..n).map(|i| arr[i * n + r]).collect();
            if !spec.is_codeword(row) || !spec.is_codeword(&col) {
                return Err(format!("product row/column {r} invalid"));
            }
        }
    }
    let spec = CodeSpec::new(8, 2).map_err(|e| e.to_string())?;
    let bits = info_bits_per_block(&spec).map_err(|e| e.to_string())?;
    let chunks: Vec<Vec<u8>> = (0..4)
        .map(|_| (0..bits).map(|_| rng.gen::<bool>() as u8).collect())
        .collect();
    let blocks = encode_staircase(&spec, &chunks).map_err(|e| e.to_string())?;
    let h = spec.n() / 2;
    for pair in blocks.windows(2) {
        for r in 0..h {
            let mut row: Vec<u8> = (0..h).map(|j| pair[0][j * h + r]).collect();
            row.extend_from_slice(&pair[1][r * h..(r + 1) * h]);
            if !spec.is_codeword(&row) {
                return Err(format!("staircase interface row {r} invalid"));
            }
        }
    }
    Ok("(64,57)^2 x10, staircase x4 blocks".into())
}

fn channel_moments() -> Result<String, String> {
    let params = ChannelParams::new(3.0, 0.5).map_err(|e| e.to_string())?;
    let mut ch = AwgnChannel::new(params);
    let mut rng = substream(0xC4A, 0);
    let count = 200_000;
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..count {
        let l = ch.llr(bpsk(0), &mut rng);
        sum += l;
        sq += l * l;
    }
    let mean = sum / count as f64;
    let var = sq / count as f64 - mean * mean;
    let (m0, v0) = (2.0 / params.sigma2, 4.0 / params.sigma2);
    let (em, ev) = ((mean - m0).abs() / m0, (var - v0).abs() / v0);
    let detail = format!("mean rel. err {em:.2e}, variance rel. err {ev:.2e}");
    if em < 0.02 && ev < 0.02 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const CHECKS: [(&str, Check); 7] = [
    ("field-tables", field_tables),
    ("bounded-decoding", bounded_decoding),
    ("oracle-equivalence", oracle_equivalence),
    ("empty-list-identity", empty_list_identity),
    ("metric-duality", metric_duality),
    ("construction-validity", construction_validity),
    ("channel-moments", channel_moments),
];

/// Runs every check in a fixed order.
pub fn run_checks() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check() {
            Ok(detail) => CheckResult {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckResult {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for r in super::run_checks() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
