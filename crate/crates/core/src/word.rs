//! Words over the five-letter burger alphabet, the stack reduction and the
//! local distance on words.
//!
//! A word lives on a contiguous integer domain `offset..offset + len`. The
//! reduction sweeps it from left to right: burgers go on a stack, an order
//! consumes the most recent compatible burger or is kept as unfulfilled.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    /// `a`
    Hamburger = 0,
    /// `b`
    Cheeseburger = 1,
    /// `A`
    HamburgerOrder = 2,
    /// `B`
    CheeseburgerOrder = 3,
    /// `F`
    Flexible = 4,
}

impl Letter {
    pub const ALL: [Letter; 5] = [
        Letter::Hamburger,
        Letter::Cheeseburger,
        Letter::HamburgerOrder,
        Letter::CheeseburgerOrder,
        Letter::Flexible,
    ];

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::Hamburger),
            'b' => Some(Letter::Cheeseburger),
            'A' => Some(Letter::HamburgerOrder),
            'B' => Some(Letter::CheeseburgerOrder),
            'F' => Some(Letter::Flexible),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::Hamburger => 'a',
            Letter::Cheeseburger => 'b',
            Letter::HamburgerOrder => 'A',
            Letter::CheeseburgerOrder => 'B',
            Letter::Flexible => 'F',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_burger(self) -> bool {
        matches!(self, Letter::Hamburger | Letter::Cheeseburger)
    }

    pub fn is_order(self) -> bool {
        !self.is_burger()
    }

    /// Whether `self` and `other` form a burger/order pair that may be matched,
    /// in either argument order.
    pub fn compatible(self, other: Letter) -> bool {
        use Letter::*;
        matches!(
            (self, other),
            (Hamburger, HamburgerOrder)
                | (Hamburger, Flexible)
                | (Cheeseburger, CheeseburgerOrder)
                | (Cheeseburger, Flexible)
                | (HamburgerOrder, Hamburger)
                | (Flexible, Hamburger)
                | (CheeseburgerOrder, Cheeseburger)
                | (Flexible, Cheeseburger)
        )
    }

    /// Exchange hamburgers and cheeseburgers; `F` is fixed.
    pub fn dual(self) -> Letter {
        use Letter::*;
        match self {
            Hamburger => Cheeseburger,
            Cheeseburger => Hamburger,
            HamburgerOrder => CheeseburgerOrder,
            CheeseburgerOrder => HamburgerOrder,
            Flexible => Flexible,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    offset: i64,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(offset: i64, letters: Vec<Letter>) -> Self {
        Word { offset, letters }
    }

    pub fn empty(offset: i64) -> Self {
        Word::new(offset, Vec::new())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// One past the last index of the domain.
    pub fn end(&self) -> i64 {
        self.offset + self.letters.len() as i64
    }

    pub fn domain(&self) -> Range<i64> {
        self.offset..self.end()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn get(&self, index: i64) -> Option<Letter> {
        if self.domain().contains(&index) {
            Some(self.letters[(index - self.offset) as usize])
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Letter)> + '_ {
        self.letters
            .iter()
            .enumerate()
            .map(move |(i, &l)| (self.offset + i as i64, l))
    }

    /// Restriction to the intersection of the domain with `range`.
    ///
    /// An empty intersection keeps the offset clamped into the domain so
    /// that empty restrictions compare equal.
    pub fn restrict(&self, range: Range<i64>) -> Word {
        let lo = range.start.max(self.offset);
        let hi = range.end.min(self.end());
        if lo >= hi {
            return Word::empty(0);
        }
        let a = (lo - self.offset) as usize;
        let b = (hi - self.offset) as usize;
        Word::new(lo, self.letters[a..b].to_vec())
    }

    pub fn with_offset(mut self, offset: i64) -> Word {
        self.offset = offset;
        self
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// Header line `offset=<int>` followed by the letters.
    pub fn to_text(&self) -> String {
        format!("offset={}\n{}\n", self.offset, self)
    }

    pub fn from_text(text: &str) -> Result<Word> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedWord("missing header line".into()))?;
        let offset = header
            .trim()
            .strip_prefix("offset=")
            .ok_or_else(|| Error::MalformedWord(format!("bad header {header:?}")))?
            .parse::<i64>()
            .map_err(|e| Error::MalformedWord(format!("bad offset: {e}")))?;
        let body = lines.next().unwrap_or("");
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::MalformedWord("trailing content".into()));
        }
        parse_word(body.trim_end_matches('\r'), offset)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn parse_word(text: &str, offset: i64) -> Result<Word> {
    let letters = text
        .chars()
        .enumerate()
        .map(|(position, c)| Letter::from_char(c).ok_or(Error::InvalidLetter { position, found: c }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Word::new(offset, letters))
}

pub fn format_word(w: &Word) -> String {
    w.to_string()
}

/// Partner of a letter under the matching; the two unmatched variants are
/// the `+inf` and `-inf` markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partner {
    Matched(i64),
    /// Burger never consumed (`+inf`).
    Leftover,
    /// Order never fulfilled (`-inf`).
    Unfulfilled,
}

impl Partner {
    pub fn index(self) -> Option<i64> {
        match self {
            Partner::Matched(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    offset: i64,
    partner: Vec<Partner>,
}

impl Matching {
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, index: i64) -> Option<Partner> {
        let i = index - self.offset;
        if i < 0 {
            return None;
        }
        self.partner.get(i as usize).copied()
    }

    /// Matched pairs `(j, k)` with `j < k`, sorted by `j`.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let j = self.offset + i as i64;
                match *p {
                    Partner::Matched(k) if j < k => Some((j, k)),
                    _ => None,
                }
            })
            .collect()
    }

    pub fn unmatched(&self) -> Vec<(i64, Partner)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|(_, p)| !matches!(p, Partner::Matched(_)))
            .map(|(i, &p)| (self.offset + i as i64, p))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Unfulfilled orders, in order of arrival.
    pub orders: Word,
    /// Leftover burgers, bottom of the stack first.
    pub burgers: Word,
    pub matching: Matching,
}

impl Reduction {
    /// The reduced word: unfulfilled orders followed by leftover burgers.
    pub fn reduced(&self) -> Word {
        let mut letters = self.orders.letters().to_vec();
        letters.extend_from_slice(self.burgers.letters());
        Word::new(0, letters)
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty() && self.burgers.is_empty()
    }
}

/// Left-to-right stack reduction.
///
/// Hamburgers and cheeseburgers sit on two separate position stacks; the
/// combined stack is their merge by position, so the top compatible burger
/// for any order is found in O(1).
pub fn reduce(w: &Word) -> Reduction {
    let n = w.len();
    let mut partner = vec![Partner::Unfulfilled; n];
    let mut top_a: Vec<usize> = Vec::new();
    let mut top_b: Vec<usize> = Vec::new();
    let mut orders = Vec::new();
    for (i, &l) in w.letters().iter().enumerate() {
        let taken = match l {
            Letter::Hamburger => {
                top_a.push(i);
                continue;
            }
            Letter::Cheeseburger => {
                top_b.push(i);
                continue;
            }
            Letter::HamburgerOrder => top_a.pop(),
            Letter::CheeseburgerOrder => top_b.pop(),
            Letter::Flexible => match (top_a.last(), top_b.last()) {
                (Some(&x), Some(&y)) => {
                    if x > y {
                        top_a.pop()
                    } else {
                        top_b.pop()
                    }
                }
                (Some(_), None) => top_a.pop(),
                (None, Some(_)) => top_b.pop(),
                (None, None) => None,
            },
        };
        match taken {
            Some(j) => {
                partner[j] = Partner::Matched(w.offset() + i as i64);
                partner[i] = Partner::Matched(w.offset() + j as i64);
            }
            None => orders.push(l),
        }
    }
    let mut left: Vec<usize> = top_a.into_iter().chain(top_b).collect();
    left.sort_unstable();
    for &j in &left {
        partner[j] = Partner::Leftover;
    }
    let burgers = left.iter().map(|&j| w.letters()[j]).collect();
    Reduction {
        orders: Word::new(0, orders),
        burgers: Word::new(0, burgers),
        matching: Matching {
            offset: w.offset(),
            partner,
        },
    }
}

/// Whether the burger at `j` and the order at `k` are matched, decided only
/// from the reduction of the open gap between them.
pub fn match_locally(w: &Word, j: i64, k: i64) -> Result<bool> {
    if j >= k {
        return Err(Error::Precondition(format!("need j < k, got {j} >= {k}")));
    }
    let (lj, lk) = match (w.get(j), w.get(k)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Precondition("index outside the word".into())),
    };
    if !lj.is_burger() || !lk.is_order() || !lj.compatible(lk) {
        return Err(Error::Precondition(format!(
            "letters {lj}{lk} are not a compatible burger/order pair"
        )));
    }
    let gap = reduce(&w.restrict(j + 1..k)).reduced();
    Ok(!gap
        .letters()
        .iter()
        .any(|&x| x.compatible(lj) || x.compatible(lk)))
}

/// `2^-R` where `R` is the largest radius with equal restrictions to
/// `[-R, R)`; zero when the words coincide on every window.
pub fn word_distance(w: &Word, w2: &Word) -> f64 {
    let extent = [w.offset(), w.end(), w2.offset(), w2.end()]
        .iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or(0);
    let mut r: i64 = 0;
    loop {
        if r > extent {
            return 0.0;
        }
        // going from R to R+1 adds the indices -R-1 and R
        if w.get(-r - 1) != w2.get(-r - 1) || w.get(r) != w2.get(r) {
            return (2.0f64).powi(-(r as i32));
        }
        r += 1;
    }
}

pub fn dual_word(w: &Word) -> Word {
    Word::new(w.offset(), w.letters().iter().map(|l| l.dual()).collect())
}

/// Iterator over all words of a given length, in lexicographic order of
/// letter indices.
pub fn all_words(len: usize, offset: i64) -> impl Iterator<Item = Word> {
    let total = 5usize.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut letters = vec![Letter::Hamburger; len];
        for slot in letters.iter_mut().rev() {
            *slot = Letter::ALL[code % 5];
            code /= 5;
        }
        Word::new(offset, letters)
    })
}
