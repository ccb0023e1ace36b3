//! The infinite-volume map read off a window of a bi-infinite word.
//!
//! Darts are word indices. With `phi` the matching, `alpha(z) = phi(z)` and
//! `sigma(z) = phi(z-1)` when letter `z-1` sits on an upper arch, `z-1`
//! otherwise; the root dart is 0. A letter matched inside a finite window is
//! matched to the same partner in every larger window, so anything computed
//! from in-window matches alone is final.

mod ball;
mod kesten;
mod srw;

pub use ball::{ball_in_window, infinite_ball, BallCertificate, DEFAULT_WINDOW_CAP, INITIAL_HALF_WIDTH};
pub use kesten::kesten_ball;
pub use srw::{srw_infinite, srw_on_map, WalkStats};

use crate::error::{Error, Result};
use crate::sampler::InfiniteWordSource;
use crate::word::{reduce, Letter, Matching, Word};

const UNRESOLVED: i64 = i64::MIN;

/// A window with its in-window matching, answering local map queries.
#[derive(Debug, Clone)]
pub struct ResolvedWindow {
    offset: i64,
    letters: Vec<Letter>,
    partner: Vec<i64>,
}

impl ResolvedWindow {
    pub fn new(w: &Word) -> Self {
        let red = reduce(w);
        let partner = (0..w.len())
            .map(|i| {
                red.matching
                    .partner(w.offset() + i as i64)
                    .and_then(|p| p.index())
                    .unwrap_or(UNRESOLVED)
            })
            .collect();
        ResolvedWindow {
            offset: w.offset(),
            letters: w.letters().to_vec(),
            partner,
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn slot(&self, z: i64) -> Option<usize> {
        let i = z - self.offset;
        (0..self.letters.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn letter(&self, z: i64) -> Option<Letter> {
        self.slot(z).map(|i| self.letters[i])
    }

    pub fn partner(&self, z: i64) -> Option<i64> {
        self.slot(z).map(|i| self.partner[i]).filter(|&p| p != UNRESOLVED)
    }

    /// Whether letter `z` lies on an upper (hamburger) arch.
    pub fn upper(&self, z: i64) -> Option<bool> {
        match self.letter(z)? {
            Letter::Hamburger | Letter::HamburgerOrder => Some(true),
            Letter::Cheeseburger | Letter::CheeseburgerOrder => Some(false),
            Letter::Flexible => Some(self.letter(self.partner(z)?)? == Letter::Hamburger),
        }
    }

    pub fn alpha(&self, z: i64) -> Option<i64> {
        self.partner(z)
    }

    pub fn sigma(&self, z: i64) -> Option<i64> {
        if self.upper(z - 1)? {
            self.partner(z - 1)
        } else {
            Some(z - 1)
        }
    }

    /// Darts around the vertex of `z`, starting at `z`.
    pub fn orbit(&self, z: i64) -> Option<Vec<i64>> {
        let mut out = vec![z];
        let mut d = self.sigma(z)?;
        while d != z {
            out.push(d);
            if out.len() > self.letters.len() {
                return None;
            }
            d = self.sigma(d)?;
        }
        Some(out)
    }

    /// `X` increment of letter `z`: +1 for `a`, -1 for a letter matched to
    /// an `a`, 0 otherwise. Orders `A` are matched to an `a` in any
    /// bi-infinite word where every letter is matched.
    pub fn x_increment(&self, z: i64) -> Option<i64> {
        Some(match self.letter(z)? {
            Letter::Hamburger => 1,
            Letter::HamburgerOrder => -1,
            Letter::Cheeseburger | Letter::CheeseburgerOrder => 0,
            Letter::Flexible => {
                if self.letter(self.partner(z)?)? == Letter::Hamburger {
                    -1
                } else {
                    0
                }
            }
        })
    }
}

/// Grows the source window by doubling from [`INITIAL_HALF_WIDTH`] until
/// `attempt` succeeds. Errors when the window would exceed `cap` letters.
pub(crate) fn grow_until<T>(
    source: &mut InfiniteWordSource,
    cap: usize,
    mut attempt: impl FnMut(&ResolvedWindow) -> Option<T>,
) -> std::result::Result<T, ResolvedWindow> {
    let mut m = source.half_width().max(INITIAL_HALF_WIDTH);
    loop {
        source.extend_window(m);
        let rw = ResolvedWindow::new(source.window());
        if let Some(t) = attempt(&rw) {
            return Ok(t);
        }
        if 4 * m > cap {
            return Err(rw);
        }
        m *= 2;
    }
}

/// Leftover hamburgers and cheeseburgers in the reduction of the window
/// prefix ending just before index `k`.
pub fn w_infty_window_check(w: &Word, k: i64) -> (usize, usize) {
    let prefix = w.restrict(w.offset()..k.min(w.end()));
    let burgers = reduce(&prefix).burgers;
    (
        burgers.count(Letter::Hamburger),
        burgers.count(Letter::Cheeseburger),
    )
}

/// Lattice walk `Z = (X, Y)` along a word, with increments flagged
/// undefined on unmatched orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurgerWalk {
    offset: i64,
    increments: Vec<Option<(i64, i64)>>,
}

pub fn burger_walk(w: &Word, matching: &Matching) -> BurgerWalk {
    let increments = w
        .iter()
        .map(|(i, l)| match l {
            Letter::Hamburger => Some((1, 0)),
            Letter::Cheeseburger => Some((0, 1)),
            _ => {
                let j = matching.partner(i).and_then(|p| p.index())?;
                match w.get(j)? {
                    Letter::Hamburger => Some((-1, 0)),
                    _ => Some((0, -1)),
                }
            }
        })
        .collect();
    BurgerWalk {
        offset: w.offset(),
        increments,
    }
}

impl BurgerWalk {
    pub fn increment(&self, index: i64) -> Result<(i64, i64)> {
        let i = index - self.offset;
        if i < 0 || i as usize >= self.increments.len() {
            return Err(Error::UndefinedWalk(index));
        }
        self.increments[i as usize].ok_or(Error::UndefinedWalk(index))
    }

    /// Index where `Z` vanishes: 0, or the nearest end of the domain.
    pub fn anchor(&self) -> i64 {
        0i64.clamp(self.offset, self.offset + self.increments.len() as i64)
    }

    /// `Z_k`, the sum of increments over `[anchor, k)` (negated for
    /// `k < anchor`).
    pub fn z(&self, k: i64) -> Result<(i64, i64)> {
        let a = self.anchor();
        let (lo, hi, sign) = if k >= a { (a, k, 1) } else { (k, a, -1) };
        let mut s = (0, 0);
        for i in lo..hi {
            let (x, y) = self.increment(i)?;
            s = (s.0 + sign * x, s.1 + sign * y);
        }
        Ok(s)
    }
}

/// Visits of `X` to 0 around the root, between its last hit of -1 before
/// index 0 and its first hit of -1 after.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootDegreeStats {
    pub i0: i64,
    pub j0: i64,
    pub n0: usize,
    pub n0_plus: usize,
    pub half_width: usize,
}

/// Root counts on a fixed window, if the window resolves them.
pub fn root_counts_in_window(rw: &ResolvedWindow) -> Option<RootDegreeStats> {
    // X_t is the value between letters t-1 and t, with X_0 = 0
    let mut x = 0;
    let mut zeros_right = 0;
    let mut t = 0;
    let j0 = loop {
        if x == 0 {
            zeros_right += 1;
        }
        x += rw.x_increment(t)?;
        t += 1;
        if x == -1 {
            break t;
        }
    };
    let mut x = 0;
    let mut zeros_left = 0;
    let mut t = 0;
    let i0 = loop {
        x -= rw.x_increment(t - 1)?;
        t -= 1;
        if x == -1 {
            break t;
        }
        if x == 0 {
            zeros_left += 1;
        }
    };
    Some(RootDegreeStats {
        i0,
        j0,
        n0: zeros_left + zeros_right,
        n0_plus: zeros_right,
        half_width: (-rw.offset()) as usize,
    })
}

pub fn root_counts(source: &mut InfiniteWordSource, window_cap: usize) -> Result<RootDegreeStats> {
    grow_until(source, window_cap, |rw| {
        root_counts_in_window(rw).map(|mut s| {
            s.half_width = (-rw.offset()) as usize;
            s
        })
    })
    .map_err(|_| Error::WindowCapExceeded {
        cap: window_cap,
        partial_radius: None,
    })
}

/// Whether the root edge is pending: `w_{-1} = a` and `w_0` is `A` or `F`.
pub fn pending_indicator(w: &Word) -> Result<bool> {
    match (w.get(-1), w.get(0)) {
        (Some(prev), Some(cur)) => {
            Ok(prev == Letter::Hamburger && matches!(cur, Letter::HamburgerOrder | Letter::Flexible))
        }
        _ => Err(Error::Precondition("window must contain indices -1 and 0".into())),
    }
}
