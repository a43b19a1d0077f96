//! Correct words: ternary column states with no `02` or `20` factor.
//!
//! A word of length `r` describes one column of an `r`-row strip. Digit `i`
//! is the state of row `i`: `0` the vertex is chosen, `1` it is dominated
//! from its own column or the previous one, `2` it is not (yet) dominated.
//!
//! Words are packed two bits per digit with row 0 in the most significant
//! position, so numeric order of the packed code is lexicographic order of
//! the digit string.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word length accepted by [`enumerate_correct_words`].
pub const MAX_ENUMERATION_ROWS: u32 = 20;

/// Longest word length representable by [`CorrectWord`].
pub const MAX_WORD_LEN: u32 = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrectWord {
    // Field order matters for the derived `Ord`: words of equal length
    // compare lexicographically.
    len: u8,
    code: u64,
}

impl CorrectWord {
    /// Builds a word from its digits, rejecting digits above 2 and the
    /// forbidden factors.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if digits.is_empty() || digits.len() > MAX_WORD_LEN as usize {
            return Err(Error::InvalidWord(format!("{digits:?}")));
        }
        let mut code = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            if d > 2 || (i > 0 && is_forbidden(digits[i - 1], d)) {
                return Err(Error::InvalidWord(format!("{digits:?}")));
            }
            code = (code << 2) | d as u64;
        }
        Ok(CorrectWord { len: digits.len() as u8, code })
    }

    pub(crate) fn from_code_unchecked(len: u32, code: u64) -> Self {
        CorrectWord { len: len as u8, code }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed representation, two bits per digit, row 0 most significant.
    #[inline]
    pub fn code(&self) -> u64 {
        self.code
    }

    /// Digit at row `i` (0 = top row).
    #[inline]
    pub fn digit(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.code >> (2 * (self.len() - 1 - i))) & 3) as u8
    }

    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.digit(i))
    }

    /// Number of rows whose digit is 0, i.e. chosen vertices in this column.
    pub fn zeros(&self) -> u32 {
        self.digits().filter(|&d| d == 0).count() as u32
    }
}

#[inline]
fn is_forbidden(a: u8, b: u8) -> bool {
    (a == 0 && b == 2) || (a == 2 && b == 0)
}

impl fmt::Display for CorrectWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CorrectWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CorrectWord({self})")
    }
}

impl FromStr for CorrectWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| match c {
                '0'..='2' => Ok(c as u8 - b'0'),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        CorrectWord::from_digits(&digits)
    }
}

/// Counts the number of zeros of a word.
pub fn word_zeros(w: &CorrectWord) -> u32 {
    w.zeros()
}

/// Number of correct words of length `r`.
///
/// Uses `a(r) = 2 a(r-1) + a(r-2)` with `a(0) = 1`, `a(1) = 3`.
pub fn count_correct_words(r: u32) -> u64 {
    let (mut prev, mut cur) = (1u64, 3u64);
    if r == 0 {
        return prev;
    }
    for _ in 1..r {
        let next = 2 * cur + prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All correct words of one length, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordTable {
    rows: u32,
    codes: Vec<u64>,
}

impl WordTable {
    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn word(&self, index: usize) -> CorrectWord {
        CorrectWord::from_code_unchecked(self.rows, self.codes[index])
    }

    /// Position of `w` in the table, or `None` if it has a different length.
    pub fn index_of(&self, w: &CorrectWord) -> Option<usize> {
        if w.len() != self.rows as usize {
            return None;
        }
        self.codes.binary_search(&w.code()).ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = CorrectWord> + '_ {
        self.codes.iter().map(move |&c| CorrectWord::from_code_unchecked(self.rows, c))
    }
}

/// Enumerates every correct word of length `r` in lexicographic order.
pub fn enumerate_correct_words(r: u32) -> Result<WordTable> {
    if !(1..=MAX_ENUMERATION_ROWS).contains(&r) {
        return Err(Error::out_of_range("rows", r, format!("word enumeration supports 1..={MAX_ENUMERATION_ROWS}")));
    }
    let mut codes = Vec::with_capacity(count_correct_words(r) as usize);
    // Depth-first, smallest digit first, so output is already sorted.
    let mut stack: Vec<(u32, u64, u8)> = vec![(0, 0, 3)];
    while let Some((depth, code, last)) = stack.pop() {
        if depth == r {
            codes.push(code);
            continue;
        }
        for d in (0..=2u8).rev() {
            if last < 3 && is_forbidden(last, d) {
                continue;
            }
            stack.push((depth + 1, (code << 2) | d as u64, d));
        }
    }
    Ok(WordTable { rows: r, codes })
}
