//! The i.i.d. letter law, exact enumeration of the finite word space and
//! samplers for finite conditioned words and bi-infinite words.

use std::ops::Range;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{all_words, reduce, Letter, Word};

/// Largest `n` accepted by [`enumerate_wn`].
pub const MAX_ENUMERATION_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivation {
    FromQ,
    FromP,
}

/// Loop weight `q` and the matching proportion `p` of flexible orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub q: f64,
    pub p: f64,
    pub derived: Derivation,
}

pub fn p_from_q(q: f64) -> f64 {
    if q.is_infinite() {
        1.0
    } else {
        let s = q.sqrt();
        s / (2.0 + s)
    }
}

pub fn q_from_p(p: f64) -> f64 {
    if p >= 1.0 {
        f64::INFINITY
    } else {
        let s = 2.0 * p / (1.0 - p);
        s * s
    }
}

impl ModelParams {
    pub fn from_q(q: f64) -> Result<Self> {
        if q.is_nan() || q < 0.0 {
            return Err(Error::Precondition(format!("q must lie in [0, inf], got {q}")));
        }
        Ok(ModelParams {
            q,
            p: p_from_q(q),
            derived: Derivation::FromQ,
        })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Precondition(format!("p must lie in [0, 1], got {p}")));
        }
        Ok(ModelParams {
            q: q_from_p(p),
            p,
            derived: Derivation::FromP,
        })
    }

    pub fn weights(&self) -> [f64; 5] {
        let p = self.p;
        [0.25, 0.25, (1.0 - p) / 4.0, (1.0 - p) / 4.0, p / 2.0]
    }
}

pub fn letter_weight(params: &ModelParams, x: Letter) -> f64 {
    params.weights()[x.index()]
}

pub fn word_probability(params: &ModelParams, w: &Word) -> f64 {
    w.letters().iter().map(|&l| letter_weight(params, l)).product()
}

/// Maps a uniform `u64` to a letter. Letters of weight zero are never
/// produced.
#[derive(Debug, Clone)]
pub struct LetterSampler {
    cut: [u128; 5],
}

impl LetterSampler {
    pub fn new(params: &ModelParams) -> Self {
        let w = params.weights();
        let scale = (u64::MAX as f64) + 1.0;
        let mut cut = [0u128; 5];
        let mut acc = 0.0;
        let last = (0..5).rev().find(|&i| w[i] > 0.0).unwrap_or(0);
        for i in 0..5 {
            acc += w[i];
            cut[i] = if i >= last {
                1u128 << 64
            } else {
                (acc * scale) as u128
            };
        }
        LetterSampler { cut }
    }

    #[inline]
    pub fn letter(&self, u: u64) -> Letter {
        let u = u as u128;
        for (i, &c) in self.cut.iter().enumerate() {
            if u < c {
                return Letter::ALL[i];
            }
        }
        Letter::ALL[4]
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Letter {
        self.letter(rng.next_u64())
    }
}

/// All words of length `2n` and empty reduction, at offset zero.
pub fn empty_reduction_words(n: usize) -> Vec<Word> {
    all_words(2 * n, 0).filter(|w| reduce(w).is_empty()).collect()
}

/// Every word of the finite word space for size `n`: the `2n` index shifts
/// `-k..2n-k` of each length-`2n` word with empty reduction.
pub fn enumerate_wn(n: usize) -> Result<Vec<Word>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::Capacity {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let base = empty_reduction_words(n);
    let mut out = Vec::with_capacity(base.len() * 2 * n);
    for k in 0..2 * n as i64 {
        out.extend(base.iter().map(|w| w.clone().with_offset(-k)));
    }
    Ok(out)
}

/// Telemetry of a rejection run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RejectionStats {
    pub trials: u64,
    pub letters_drawn: u64,
}

/// Draws one word of the conditioned law by rejection: i.i.d. letters,
/// rejected as soon as an order cannot be fulfilled or the stack can no
/// longer be emptied, then a uniform shift of the indices.
pub fn sample_wn<R: RngCore + ?Sized>(
    params: &ModelParams,
    n: usize,
    rng: &mut R,
    retry_cap: Option<u64>,
) -> Result<(Word, RejectionStats)> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let sampler = LetterSampler::new(params);
    let len = 2 * n;
    let mut letters = Vec::with_capacity(len);
    let mut top_a: Vec<u32> = Vec::with_capacity(len);
    let mut top_b: Vec<u32> = Vec::with_capacity(len);
    let mut stats = RejectionStats::default();
    loop {
        if let Some(cap) = retry_cap {
            if stats.trials >= cap {
                return Err(Error::RetryCapExceeded {
                    cap,
                    accepted: 0,
                    rate: 0.0,
                });
            }
        }
        stats.trials += 1;
        letters.clear();
        top_a.clear();
        top_b.clear();
        let mut ok = true;
        for i in 0..len {
            let l = sampler.sample(rng);
            stats.letters_drawn += 1;
            letters.push(l);
            let fulfilled = match l {
                Letter::Hamburger => {
                    top_a.push(i as u32);
                    true
                }
                Letter::Cheeseburger => {
                    top_b.push(i as u32);
                    true
                }
                Letter::HamburgerOrder => top_a.pop().is_some(),
                Letter::CheeseburgerOrder => top_b.pop().is_some(),
                Letter::Flexible => match (top_a.last(), top_b.last()) {
                    (Some(x), Some(y)) => {
                        if x > y {
                            top_a.pop();
                        } else {
                            top_b.pop();
                        }
                        true
                    }
                    (Some(_), None) => top_a.pop().is_some(),
                    (None, Some(_)) => top_b.pop().is_some(),
                    (None, None) => false,
                },
            };
            if !fulfilled || top_a.len() + top_b.len() > len - i - 1 {
                ok = false;
                break;
            }
        }
        if ok {
            let k = rng.random_range(0..len) as i64;
            return Ok((Word::new(-k, letters), stats));
        }
    }
}

/// Draws `count` words, each from its own counter-addressed stream of `seed`,
/// so results do not depend on evaluation order.
pub fn sample_many(
    params: &ModelParams,
    n: usize,
    count: usize,
    seed: u64,
    retry_cap: Option<u64>,
) -> Result<Vec<Word>> {
    let mut out = Vec::with_capacity(count);
    let mut total = RejectionStats::default();
    for i in 0..count {
        let mut rng = stream_rng(seed, i as u64);
        match sample_wn(params, n, &mut rng, retry_cap) {
            Ok((w, s)) => {
                total.trials += s.trials;
                out.push(w);
            }
            Err(Error::RetryCapExceeded { cap, .. }) => {
                let accepted = out.len() as u64;
                let rate = accepted as f64 / (total.trials + cap).max(1) as f64;
                return Err(Error::RetryCapExceeded { cap, accepted, rate });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Independent RNG for task `stream` of a run seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Lazily materialized bi-infinite word with i.i.d. letters.
///
/// The letter at index `z` is read from a fixed position of a ChaCha stream
/// (stream 0 for `z >= 0`, stream 1 for `z < 0`), so extending the window
/// never changes letters already produced and equal seeds give equal words.
#[derive(Debug, Clone)]
pub struct InfiniteWordSource {
    seed: u64,
    params: ModelParams,
    sampler: LetterSampler,
    window: Word,
}

impl InfiniteWordSource {
    pub fn new(params: ModelParams, seed: u64) -> Self {
        InfiniteWordSource {
            seed,
            params,
            sampler: LetterSampler::new(&params),
            window: Word::empty(0),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn half_width(&self) -> usize {
        (-self.window.offset()) as usize
    }

    pub fn window(&self) -> &Word {
        &self.window
    }

    fn fill(&self, range: Range<i64>) -> Vec<Letter> {
        let mut out = Vec::with_capacity((range.end - range.start).max(0) as usize);
        let mut z = range.start;
        while z < range.end {
            let (stream, pos) = if z >= 0 {
                (0, z as u128)
            } else {
                (1, (-z - 1) as u128)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(stream);
            rng.set_word_pos(2 * pos);
            if z >= 0 {
                while z < range.end {
                    out.push(self.sampler.letter(rng.next_u64()));
                    z += 1;
                }
            } else {
                // negative indices run backwards in their stream
                let stop = range.end.min(0);
                let count = (stop - z) as usize;
                let mut block = Vec::with_capacity(count);
                rng.set_word_pos(2 * ((-stop) as u128));
                for _ in 0..count {
                    block.push(self.sampler.letter(rng.next_u64()));
                }
                block.reverse();
                out.extend(block);
                z = stop;
            }
        }
        out
    }

    pub fn letter(&self, z: i64) -> Letter {
        if let Some(l) = self.window.get(z) {
            return l;
        }
        self.fill(z..z + 1)[0]
    }

    /// Materializes and returns the window `[-m, m)`.
    pub fn extend_window(&mut self, m: usize) -> Word {
        let m_i = m as i64;
        let cur = self.half_width() as i64;
        if m_i > cur {
            let mut letters = self.fill(-m_i..-cur);
            letters.extend_from_slice(self.window.letters());
            letters.extend(self.fill(cur..m_i));
            self.window = Word::new(-m_i, letters);
            self.window.clone()
        } else {
            self.window.restrict(-m_i..m_i)
        }
    }
}
