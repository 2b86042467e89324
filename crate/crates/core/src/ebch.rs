//! Extended BCH constituent codes: systematic encoding and bounded-distance
//! hard decoding for t = 1 and t = 2.
//!
//! Bit layout of a length-n codeword: `k` message bits, then the `n - 1 - k`
//! remainder bits of the inner BCH code, then one overall even-parity bit.
//! Inner position `j` (0 <= j < n - 1) carries the coefficient of
//! `x^(n - 2 - j)`, so the message occupies the high-degree end.

use std::sync::Arc;

use crate::gf::{Element, FieldTable};
use crate::Error;

/// A length-n word of hard bits (each 0 or 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HardWord(pub Vec<u8>);

impl HardWord {
    pub fn zeros(n: usize) -> Self {
        HardWord(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b != 0).count()
    }

    pub fn distance(&self, other: &HardWord) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl From<Vec<u8>> for HardWord {
    fn from(bits: Vec<u8>) -> Self {
        HardWord(bits)
    }
}

/// Error positions found by the algebraic decoder (inner positions only).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correction {
    None,
    One(usize),
    Two(usize, usize),
}

impl Correction {
    pub fn positions(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Correction::None => (None, None),
            Correction::One(i) => (Some(i), None),
            Correction::Two(i, j) => (Some(i), Some(j)),
        };
        a.into_iter().chain(b)
    }
}

/// An (n, k) extended BCH code with designed radius t.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    n: usize,
    k: usize,
    t: usize,
    generator: u64,
    field: Arc<FieldTable>,
    /// `x^(n-2-j) mod g` for each message position j.
    message_rems: Vec<u64>,
    /// Syndrome contribution `alpha^(n-2-j)` of inner position j.
    s1_col: Vec<Element>,
    /// `alpha^(3(n-2-j))`.
    s3_col: Vec<Element>,
}

/// Multiplies two polynomials over GF(2^m) given as coefficient vectors,
/// lowest degree first.
fn poly_mul(field: &FieldTable, a: &[Element], b: &[Element]) -> Vec<Element> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= field.mul(x, y);
        }
    }
    out
}

fn degree(p: u64) -> usize {
    63 - p.leading_zeros() as usize
}

/// Remainder of a binary polynomial modulo `g`.
fn poly_rem(mut p: u64, g: u64) -> u64 {
    let dg = degree(g);
    while p != 0 && degree(p) >= dg {
        p ^= g << (degree(p) - dg);
    }
    p
}

impl CodeSpec {
    /// Builds the extended BCH code of length `2^m` correcting `t` errors,
    /// using the default primitive polynomial for `m`.
    pub fn new(m: u32, t: usize) -> Result<Self, Error> {
        if t != 1 && t != 2 {
            return Err(Error::UnsupportedCode { m, t });
        }
        let field = Arc::new(FieldTable::new(m).map_err(|_| Error::UnsupportedCode { m, t })?);
        let order = field.order();

        // Union of the cyclotomic cosets of 1 (and 3 for t = 2).
        let mut roots = vec![false; order];
        for base in [1usize, 3].into_iter().take(t) {
            let mut e = base % order;
            loop {
                roots[e] = true;
                e = (2 * e) % order;
                if e == base % order {
                    break;
                }
            }
        }
        let mut gen: Vec<Element> = vec![1];
        for (e, _) in roots.iter().enumerate().filter(|(_, &r)| r) {
            gen = poly_mul(&field, &gen, &[field.exp(e), 1]);
        }
        let mut generator = 0u64;
        for (i, &c) in gen.iter().enumerate() {
            debug_assert!(c <= 1, "minimal polynomial product must be binary");
            if c == 1 {
                generator |= 1 << i;
            }
        }

        let n = order + 1;
        let redundancy = degree(generator);
        if redundancy + 1 >= n {
            return Err(Error::UnsupportedCode { m, t });
        }
        let k = n - 1 - redundancy;

        let message_rems = (0..k)
            .map(|j| {
                let e = n - 2 - j;
                // x^e mod g without overflowing u64: reduce incrementally.
                let mut r = 1u64;
                for _ in 0..e {
                    r = poly_rem(r << 1, generator);
                }
                r
            })
            .collect();
        let s1_col = (0..n - 1).map(|j| field.exp(n - 2 - j)).collect();
        let s3_col = (0..n - 1).map(|j| field.exp(3 * (n - 2 - j))).collect();

        Ok(Self {
            n,
            k,
            t,
            generator,
            field,
            message_rems,
            s1_col,
            s3_col,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Generator polynomial of the inner BCH code, bit i = coefficient of x^i.
    pub fn generator_poly(&self) -> u64 {
        self.generator
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    /// Code rate k/n of the constituent code.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Systematic encoding of `message` (length k) into `out` (length n).
    pub fn encode_into(&self, message: &[u8], out: &mut [u8]) {
        assert_eq!(message.len(), self.k, "message length must equal k");
        assert_eq!(out.len(), self.n, "codeword buffer length must equal n");
        let mut rem = 0u64;
        let mut parity = 0u8;
        for (j, &b) in message.iter().enumerate() {
            out[j] = b & 1;
            if b & 1 != 0 {
                rem ^= self.message_rems[j];
                parity ^= 1;
            }
        }
        let r = self.n - 1 - self.k;
        for i in 0..r {
            // position k + i holds the coefficient of x^(r - 1 - i)
            let bit = ((rem >> (r - 1 - i)) & 1) as u8;
            out[self.k + i] = bit;
            parity ^= bit;
        }
        out[self.n - 1] = parity;
    }

    pub fn encode(&self, message: &[u8]) -> HardWord {
        let mut out = vec![0; self.n];
        self.encode_into(message, &mut out);
        HardWord(out)
    }

    /// Inner syndromes (S1, S3) of a length-n (or n-1) word. S3 is zero for t = 1.
    pub fn syndromes(&self, word: &[u8]) -> (Element, Element) {
        let mut s1 = 0;
        let mut s3 = 0;
        for (j, &b) in word[..self.n - 1].iter().enumerate() {
            if b != 0 {
                s1 ^= self.s1_col[j];
                s3 ^= self.s3_col[j];
            }
        }
        if self.t == 1 {
            s3 = 0;
        }
        (s1, s3)
    }

    /// Syndrome contribution of a single inner position.
    #[inline]
    pub fn column_syndrome(&self, j: usize) -> (Element, Element) {
        if j >= self.n - 1 {
            (0, 0)
        } else if self.t == 1 {
            (self.s1_col[j], 0)
        } else {
            (self.s1_col[j], self.s3_col[j])
        }
    }

    #[inline]
    fn position_of(&self, locator: Element) -> usize {
        let e = self.field.log(locator).expect("locator is nonzero");
        self.n - 2 - e
    }

    /// Solves for the inner error positions from the syndromes. `None` means
    /// the syndrome pattern is not within the decoding radius.
    pub fn locate(&self, s1: Element, s3: Element) -> Option<Correction> {
        let f = &*self.field;
        if self.t == 1 {
            return Some(if s1 == 0 {
                Correction::None
            } else {
                Correction::One(self.position_of(s1))
            });
        }
        if s1 == 0 {
            return if s3 == 0 { Some(Correction::None) } else { None };
        }
        let s1_cubed = f.mul(s1, f.mul(s1, s1));
        if s1_cubed == s3 {
            return Some(Correction::One(self.position_of(s1)));
        }
        // Locators X1, X2 are the roots of X^2 + S1 X + (S1^3 + S3)/S1.
        // Substituting X = S1 y gives y^2 + y = (S1^3 + S3)/S1^3.
        let c = f.div(s1_cubed ^ s3, s1_cubed).expect("s1 is nonzero");
        let y = f.solve_quadratic(c)?;
        let x1 = f.mul(s1, y);
        let x2 = f.mul(s1, y ^ 1);
        Some(Correction::Two(self.position_of(x1), self.position_of(x2)))
    }

    /// Bounded-distance decoding of the extended code: the inner word is
    /// corrected algebraically and the overall parity bit recomputed.
    pub fn decode_bounded(&self, word: &HardWord) -> Option<HardWord> {
        assert_eq!(word.len(), self.n, "word length must equal n");
        let (s1, s3) = self.syndromes(&word.0);
        let correction = self.locate(s1, s3)?;
        let mut out = word.clone();
        for j in correction.positions() {
            out.0[j] ^= 1;
        }
        let inner_parity = out.0[..self.n - 1].iter().fold(0, |acc, &b| acc ^ b);
        out.0[self.n - 1] = inner_parity;
        Some(out)
    }

    /// True if `word` is a codeword: zero inner syndromes and even weight.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.syndromes(word) == (0, 0) && word.iter().fold(0u8, |acc, &b| acc ^ b) == 0
    }
}
