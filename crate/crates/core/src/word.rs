//! Words in the generators and their cyclic canonical forms.

use std::cmp::Ordering;
use std::fmt;

/// Zero-based generator index; `0` prints as `X1`.
pub type Letter = u8;

/// A finite sequence of generators. The empty word is the identity.
///
/// Ordered graded-lexicographically: shorter words first, then by letters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from one-based generator indices.
    pub fn from_one_based(indices: &[usize]) -> Self {
        Word(indices.iter().map(|&i| (i - 1) as Letter).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    /// The lexicographically least rotation.
    pub fn canonical_rotation(&self) -> Word {
        self.rotate(least_rotation(&self.0))
    }

    pub fn is_canonical_rotation(&self) -> bool {
        self.canonical_rotation() == *self
    }

    /// Number of occurrences of each letter below `m`.
    pub fn degrees(&self, m: usize) -> Vec<usize> {
        let mut d = vec![0; m];
        for &l in &self.0 {
            d[l as usize] += 1;
        }
        d
    }

    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Word {
        Word(self.0.iter().map(|&l| f(l)).collect())
    }
}

/// Booth's algorithm: start index of the least rotation.
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let mut fail = vec![-1isize; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = fail[j - k - 1];
        while i != -1 && sj != s[(k + i as usize + 1) % n] {
            if sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && sj != s[k % n] {
            if sj < s[k % n] {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// `X1*X2*X1`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "X{}", *l as usize + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| (*l as usize + 1).to_string()).collect();
        write!(f, "w[{}]", s.join(","))
    }
}

/// All words of length `<= max_len` over `m` letters in graded-lex order,
/// the empty word first.
pub fn words_up_to(m: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| words_of_length(m, len))
}

pub fn words_of_length(m: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = if m == 0 && len > 0 { 0 } else { m.pow(len as u32) };
    (0..total).map(move |mut code| {
        let mut letters = vec![0 as Letter; len];
        for slot in letters.iter_mut().rev() {
            *slot = (code % m) as Letter;
            code /= m;
        }
        Word(letters)
    })
}
