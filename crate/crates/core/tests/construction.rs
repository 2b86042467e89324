use fec_core::channel::substream;
use fec_core::product::encode_product;
use fec_core::staircase::{encode_staircase, info_bits_per_block, staircase_rate};
use fec_core::CodeSpec;
use rand::Rng;

fn random_bits(rng: &mut impl Rng, count: usize) -> Vec<u8> {
    (0..count).map(|_| rng.gen::<bool>() as u8).collect()
}

fn assert_codeword(spec: &CodeSpec, word: &[u8]) {
    assert!(spec.is_codeword(word), "not a codeword: {word:?}");
    let (s1, s3) = spec.syndromes(word);
    assert_eq!((s1, s3), (0, 0));
    assert_eq!(word.iter().map(|&b| b as u32).sum::<u32>() % 2, 0);
}

fn check_product(spec: &CodeSpec, arr: &[u8]) {
    let n = spec.n();
    for r in 0..n {
        assert_codeword(spec, &arr[r * n..(r + 1) * n]);
        let col: Vec<u8> = (0..n).map(|i| arr[i * n + r]).collect();
        assert_codeword(spec, &col);
    }
}

#[test]
fn product_words_have_codeword_rows_and_columns() {
    let spec = CodeSpec::new(6, 1).unwrap();
    assert_eq!((spec.n(), spec.k()), (64, 57));
    let mut rng = substream(5, 0);
    for _ in 0..100 {
        let info = random_bits(&mut rng, 57 * 57);
        check_product(&spec, &encode_product(&spec, &info));
    }
}

#[test]
fn every_small_product_word_is_valid() {
    let spec = CodeSpec::new(3, 1).unwrap();
    for v in 0u32..1 << 16 {
        if v % 257 != 0 && v.count_ones() > 2 {
            continue;
        }
        let info: Vec<u8> = (0..16).map(|j| ((v >> j) & 1) as u8).collect();
        check_product(&spec, &encode_product(&spec, &info));
    }
    assert!(encode_product(&spec, &[0; 16]).iter().all(|&b| b == 0));
}

#[test]
fn staircase_interfaces_are_codewords() {
    let spec = CodeSpec::new(8, 2).unwrap();
    assert!((staircase_rate(&spec) - 111.0 / 128.0).abs() < 1e-15);
    let bits = info_bits_per_block(&spec).unwrap();
    assert_eq!(bits, 128 * 111);
    let mut rng = substream(6, 0);
    let chunks: Vec<Vec<u8>> = (0..10).map(|_| random_bits(&mut rng, bits)).collect();
    let blocks = encode_staircase(&spec, &chunks).unwrap();
    assert_eq!(blocks.len(), 11);
    assert!(blocks[0].iter().all(|&b| b == 0));
    let h = 128;
    for pair in blocks.windows(2) {
        for r in 0..h {
            let mut row: Vec<u8> = (0..h).map(|j| pair[0][j * h + r]).collect();
            row.extend_from_slice(&pair[1][r * h..(r + 1) * h]);
            assert_codeword(&spec, &row);
        }
    }
}
