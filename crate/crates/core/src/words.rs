//! Words over {x, y}.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn sharp(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid word `{0}`: letters must be x or y")]
pub struct WordParseError(pub String);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// z_k for 1 ≤ k ≤ n.
    pub fn z(&self, k: usize) -> Letter {
        self.0[k - 1]
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn power(&self, k: usize) -> Word {
        Word(self.0.iter().cloned().cycle().take(self.len() * k).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "eps");
        }
        for l in &self.0 {
            write!(f, "{}", if *l == Letter::X { 'x' } else { 'y' })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordParseError;
    fn from_str(s: &str) -> Result<Word, WordParseError> {
        let s = s.trim();
        if s.is_empty() || s == "eps" || s == "ε" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                _ => Err(WordParseError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn sharp_word(w: &Word) -> Word {
    Word(w.0.iter().map(|l| l.sharp()).collect())
}

/// Cyclic left rotation: 1.z₁z₂…z_n = z₂…z_n z₁.
pub fn rotate(w: &Word, k: i64) -> Word {
    if w.is_empty() {
        return w.clone();
    }
    let mut v = w.0.clone();
    v.rotate_left(k.rem_euclid(w.len() as i64) as usize);
    Word(v)
}

/// True iff m | n and w is not u^k (k ≥ 2) for an m-word u. The empty word
/// is periodic (ε = ε²).
pub fn is_nonperiodic_mword(w: &Word, m: usize) -> bool {
    let n = w.len();
    if m == 0 || n % m != 0 || n == 0 {
        return false;
    }
    for len in (m..n).step_by(m) {
        if n % len == 0 && w.0.chunks(len).all(|c| c == &w.0[..len]) {
            return false;
        }
    }
    true
}

/// w₀ with w = w₀·w₀♯, w₀ a nonempty m-word.
pub fn split_self_sharp(w: &Word, m: usize) -> Option<Word> {
    let n = w.len();
    if n == 0 || n % 2 != 0 || m == 0 {
        return None;
    }
    let h = n / 2;
    if h % m != 0 {
        return None;
    }
    let w0 = Word(w.0[..h].to_vec());
    (sharp_word(&w0).0 == w.0[h..]).then_some(w0)
}
