//! Staircase codes: encoding and sliding-window soft decoding.
//!
//! Blocks are h x h with h = n/2, row-major. Every row r of `[B_{i-1}^T, B_i]`
//! is a constituent codeword: its first h bits are column r of `B_{i-1}` and
//! its last h bits are row r of `B_i`. The pair `(B_{i-1}, B_i)` is called an
//! interface. Each bit belongs to exactly two interfaces, so every block keeps
//! two extrinsic arrays: `extrinsic_new` written by the interface where it is
//! the newer block, `extrinsic_old` by the one where it is the older block.

use std::collections::VecDeque;

use crate::chase::{chase2_list, hard_bit};
use crate::ebch::CodeSpec;
use crate::softout::{proposed_soft_output_into, pyndiah_like_raw_into, SoftOutput, SoftWorkspace};
use crate::Error;

/// Channel LLR assigned to the known bits of `B_0`.
pub const KNOWN_LLR: f64 = 1e9;

/// Soft-output rule for sliding-window decoding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StairRule {
    Proposed {
        gamma: f64,
    },
    /// Full list sums, constant weights and no normalization.
    PyndiahLike {
        alpha: f64,
        beta: f64,
    },
}

impl StairRule {
    pub fn validate(&self) -> Result<(), Error> {
        let ok = match *self {
            StairRule::Proposed { gamma } => gamma > 0.0 && gamma.is_finite(),
            StairRule::PyndiahLike { alpha, beta } => {
                alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid staircase rule {self:?}")))
        }
    }
}

/// Half of the constituent length, the side of a block.
fn half(spec: &CodeSpec) -> Result<usize, Error> {
    let h = spec.n() / 2;
    if spec.k() <= h {
        return Err(Error::InvalidParameter(format!(
            "({}, {}) code leaves no room for information in a staircase block",
            spec.n(),
            spec.k()
        )));
    }
    Ok(h)
}

/// Information bits carried by one block: h rows of `k - h` bits.
pub fn info_bits_per_block(spec: &CodeSpec) -> Result<usize, Error> {
    let h = half(spec)?;
    Ok(h * (spec.k() - h))
}

/// Rate `2k/n - 1` of the unterminated code.
pub fn staircase_rate(spec: &CodeSpec) -> f64 {
    2.0 * spec.k() as f64 / spec.n() as f64 - 1.0
}

/// Streaming staircase encoder. The first block it produces is `B_1`; `B_0`
/// is all zeros.
#[derive(Clone, Debug)]
pub struct StaircaseEncoder {
    spec: CodeSpec,
    h: usize,
    prev: Vec<u8>,
    message: Vec<u8>,
    codeword: Vec<u8>,
}

impl StaircaseEncoder {
    pub fn new(spec: CodeSpec) -> Result<Self, Error> {
        let h = half(&spec)?;
        let n = spec.n();
        let k = spec.k();
        Ok(Self {
            spec,
            h,
            prev: vec![0; h * h],
            message: vec![0; k],
            codeword: vec![0; n],
        })
    }

    /// Encodes the next block from `h * (k - h)` information bits, laid out
    /// row by row. Returns the h x h block.
    pub fn next_block(&mut self, info: &[u8]) -> Vec<u8> {
        let h = self.h;
        let width = self.spec.k() - h;
        assert_eq!(info.len(), h * width, "wrong number of information bits");
        let mut block = vec![0u8; h * h];
        for r in 0..h {
            for j in 0..h {
                self.message[j] = self.prev[j * h + r];
            }
            self.message[h..].copy_from_slice(&info[r * width..(r + 1) * width]);
            self.spec.encode_into(&self.message, &mut self.codeword);
            block[r * h..(r + 1) * h].copy_from_slice(&self.codeword[h..]);
        }
        self.prev.copy_from_slice(&block);
        block
    }
}

/// Encodes a stream of information chunks into `B_0, B_1, ...`.
pub fn encode_staircase(spec: &CodeSpec, info: &[Vec<u8>]) -> Result<Vec<Vec<u8>>, Error> {
    let h = half(spec)?;
    let mut enc = StaircaseEncoder::new(spec.clone())?;
    let mut blocks = vec![vec![0u8; h * h]];
    for chunk in info {
        blocks.push(enc.next_block(chunk));
    }
    Ok(blocks)
}

/// Extracts the information columns of a block.
pub fn block_info(spec: &CodeSpec, block: &[u8]) -> Vec<u8> {
    let h = spec.n() / 2;
    let width = spec.k() - h;
    (0..h)
        .flat_map(|r| block[r * h..r * h + width].iter().copied())
        .collect()
}

/// One block on the decoder side.
#[derive(Clone, Debug, PartialEq)]
pub struct StairBlock {
    pub index: u64,
    pub channel: Vec<f64>,
    pub extrinsic_new: Vec<f64>,
    pub extrinsic_old: Vec<f64>,
}

impl StairBlock {
    pub fn new(index: u64, channel: Vec<f64>) -> Self {
        let size = channel.len();
        Self {
            index,
            channel,
            extrinsic_new: vec![0.0; size],
            extrinsic_old: vec![0.0; size],
        }
    }

    /// The known all-zero block `B_0`.
    pub fn known(h: usize) -> Self {
        Self::new(0, vec![KNOWN_LLR; h * h])
    }
}

/// The `w` most recent blocks, oldest first.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeWindow {
    w: usize,
    blocks: VecDeque<StairBlock>,
}

impl DecodeWindow {
    pub fn new(w: usize) -> Result<Self, Error> {
        if w < 2 {
            return Err(Error::InvalidParameter(format!(
                "window size must be at least 2, got {w}"
            )));
        }
        Ok(Self {
            w,
            blocks: VecDeque::with_capacity(w + 1),
        })
    }

    pub fn size(&self) -> usize {
        self.w
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == self.w
    }

    pub fn blocks(&self) -> &VecDeque<StairBlock> {
        &self.blocks
    }

    /// Appends a block while the window is still filling.
    pub fn push(&mut self, block: StairBlock) -> Result<(), Error> {
        if self.is_full() {
            return Err(Error::InvalidParameter("window is already full".into()));
        }
        if let Some(last) = self.blocks.back() {
            if block.index != last.index + 1 {
                return Err(Error::InvalidParameter("blocks must have consecutive indices".into()));
            }
        }
        self.blocks.push_back(block);
        Ok(())
    }

    /// Drops the oldest block and appends `next` with zeroed extrinsic
    /// arrays. Surviving blocks are not touched.
    pub fn slide(&mut self, mut next: StairBlock) -> Result<StairBlock, Error> {
        if !self.is_full() {
            return Err(Error::WindowNotFull {
                expected: self.w,
                actual: self.blocks.len(),
            });
        }
        next.extrinsic_new.fill(0.0);
        next.extrinsic_old.fill(0.0);
        let departed = self.blocks.pop_front().expect("window is full");
        if let Some(last) = self.blocks.back() {
            next.index = last.index + 1;
        }
        self.blocks.push_back(next);
        Ok(departed)
    }
}

/// Sliding-window decoder.
#[derive(Clone, Debug)]
pub struct StaircaseDecoder {
    spec: CodeSpec,
    p: usize,
    rule: StairRule,
    h: usize,
}

struct Scratch {
    input: Vec<f64>,
    out: SoftOutput,
    ws: SoftWorkspace,
    word: Vec<u8>,
}

impl StaircaseDecoder {
    pub fn new(spec: CodeSpec, p: usize, rule: StairRule) -> Result<Self, Error> {
        rule.validate()?;
        let h = half(&spec)?;
        Ok(Self { spec, p, rule, h })
    }

    pub fn block_side(&self) -> usize {
        self.h
    }

    /// Decodes the `w - 1` interfaces of a full window, newest first, and
    /// returns the decisions for the oldest block (h x h bits).
    pub fn decode_window(&self, window: &mut DecodeWindow) -> Result<Vec<u8>, Error> {
        if !window.is_full() {
            return Err(Error::WindowNotFull {
                expected: window.w,
                actual: window.len(),
            });
        }
        let n = self.spec.n();
        let mut s = Scratch {
            input: vec![0.0; n],
            out: SoftOutput::new(n),
            ws: SoftWorkspace::new(),
            word: vec![0; n],
        };
        let mut decisions = vec![0u8; self.h * self.h];
        for older in (0..window.w - 1).rev() {
            let decide = (older == 0).then_some(&mut decisions[..]);
            self.decode_interface(window, older, &mut s, decide);
        }
        Ok(decisions)
    }

    /// Order in which [`Self::decode_window`] visits interfaces, as pairs of
    /// window positions.
    pub fn schedule(w: usize) -> Vec<(usize, usize)> {
        (0..w.saturating_sub(1)).rev().map(|a| (a, a + 1)).collect()
    }

    fn decode_interface(
        &self,
        window: &mut DecodeWindow,
        older: usize,
        s: &mut Scratch,
        mut decisions: Option<&mut [u8]>,
    ) {
        let h = self.h;
        let ln_gamma = match self.rule {
            StairRule::Proposed { gamma } => gamma.ln(),
            StairRule::PyndiahLike { .. } => 0.0,
        };
        let blocks = window.blocks.make_contiguous();
        let (head, tail) = blocks.split_at_mut(older + 1);
        let (old_block, new_block) = (&mut head[older], &mut tail[0]);

        for r in 0..h {
            for j in 0..h {
                let at = j * h + r;
                s.input[j] = old_block.channel[at] + old_block.extrinsic_new[at];
                let at = r * h + j;
                s.input[h + j] = new_block.channel[at] + new_block.extrinsic_old[at];
            }
            let list = chase2_list(&self.spec, &s.input, self.p);
            match self.rule {
                StairRule::Proposed { .. } => {
                    proposed_soft_output_into(&list, &s.input, ln_gamma, &mut s.ws, &mut s.out);
                }
                StairRule::PyndiahLike { alpha, beta } => {
                    if list.is_empty() {
                        for i in 0..2 * h {
                            let x = if hard_bit(s.input[i]) == 0 { 1.0 } else { -1.0 };
                            s.out.extrinsic[i] = alpha * beta * x;
                        }
                    } else {
                        pyndiah_like_raw_into(&list, &s.input, &mut s.ws, &mut s.out).expect("list is nonempty");
                        for i in 0..2 * h {
                            let d = s.out.extrinsic[i];
                            s.out.extrinsic[i] = if s.out.saturated[i] {
                                alpha * beta * d
                            } else {
                                alpha * d
                            };
                        }
                    }
                }
            }
            for j in 0..h {
                old_block.extrinsic_old[j * h + r] = s.out.extrinsic[j];
                new_block.extrinsic_new[r * h + j] = s.out.extrinsic[h + j];
            }
            if let Some(dec) = decisions.as_deref_mut() {
                crate::product::ml_decision(&list, &s.input, &mut s.word);
                for j in 0..h {
                    dec[j * h + r] = s.word[j];
                }
            }
        }
    }
}

/// Feeds blocks one at a time and yields decisions as blocks leave the
/// window.
#[derive(Clone, Debug)]
pub struct SlidingDecoder {
    decoder: StaircaseDecoder,
    window: DecodeWindow,
}

impl SlidingDecoder {
    /// Starts a chain whose window already holds the known block `B_0`.
    pub fn new(decoder: StaircaseDecoder, w: usize) -> Result<Self, Error> {
        let mut window = DecodeWindow::new(w)?;
        window.push(StairBlock::known(decoder.h))?;
        Ok(Self { decoder, window })
    }

    pub fn window(&self) -> &DecodeWindow {
        &self.window
    }

    /// Adds the channel LLRs of the next block. Once the window is full,
    /// every push decodes it and returns the oldest block's index and bits;
    /// that block leaves the window on the following push.
    pub fn push(&mut self, channel: Vec<f64>) -> Result<Option<(u64, Vec<u8>)>, Error> {
        let index = self.window.blocks.back().map_or(0, |b| b.index + 1);
        let block = StairBlock::new(index, channel);
        if self.window.is_full() {
            self.window.slide(block)?;
        } else {
            self.window.push(block)?;
            if !self.window.is_full() {
                return Ok(None);
            }
        }
        let decided = self.decoder.decode_window(&mut self.window)?;
        let oldest = self.window.blocks.front().expect("window is full").index;
        Ok(Some((oldest, decided)))
    }
}
