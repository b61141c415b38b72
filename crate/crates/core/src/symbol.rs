//! Input symbols, tape letters and words.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Token for the left endmarker in text formats.
pub const LEFT_END_TOKEN: &str = "<";
/// Token for the right endmarker in text formats.
pub const RIGHT_END_TOKEN: &str = ">";
/// Token for the empty move of a communicating component.
pub const LAMBDA_TOKEN: &str = "@";

/// Index of an input symbol inside its [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub u16);

impl Sym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A word over an alphabet, stored as symbol indices.
pub type Word = Vec<Sym>;

/// What a head can scan: an input symbol or one of the two endmarkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    LeftEnd,
    Sym(Sym),
    RightEnd,
}

impl Letter {
    pub fn is_endmarker(self) -> bool {
        !matches!(self, Letter::Sym(_))
    }
}

/// Ordered, finite set of named input symbols. Declaration order is the
/// total order used for length-lexicographic enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

fn is_reserved(name: &str) -> bool {
    name == LEFT_END_TOKEN || name == RIGHT_END_TOKEN || name == LAMBDA_TOKEN
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Alphabet { names: Vec::new(), index: HashMap::new() };
        for name in names {
            let name = name.into();
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',' || c == '#') {
                return Err(Error::usage(format!("invalid symbol name {name:?}")));
            }
            if is_reserved(&name) {
                return Err(Error::usage(format!("symbol {name:?} is a reserved token")));
            }
            if alphabet.index.contains_key(&name) {
                return Err(Error::usage(format!("duplicate symbol {name:?}")));
            }
            if alphabet.names.len() >= u16::MAX as usize {
                return Err(Error::usage("alphabet too large"));
            }
            let sym = Sym(alphabet.names.len() as u16);
            alphabet.index.insert(name.clone(), sym);
            alphabet.names.push(name);
        }
        Ok(alphabet)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.names.len()).map(|i| Sym(i as u16))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, sym: Sym) -> &str {
        &self.names[sym.index()]
    }

    pub fn get(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, sym: Sym) -> bool {
        sym.index() < self.names.len()
    }

    /// Same symbol names, regardless of declaration order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.names.iter().all(|n| other.index.contains_key(n))
    }

    /// Resolves a symbol name, rejecting endmarker tokens explicitly.
    pub fn lookup(&self, name: &str) -> Result<Sym> {
        if name == LEFT_END_TOKEN || name == RIGHT_END_TOKEN {
            return Err(Error::usage(format!("endmarker token {name:?} is not allowed inside a word")));
        }
        self.get(name).ok_or_else(|| Error::usage(format!("symbol {name:?} is not in the alphabet")))
    }

    /// Letter tokens as used in transition lines: symbols plus `<` and `>`.
    pub fn letter(&self, token: &str) -> Result<Letter> {
        match token {
            LEFT_END_TOKEN => Ok(Letter::LeftEnd),
            RIGHT_END_TOKEN => Ok(Letter::RightEnd),
            _ => self
                .get(token)
                .map(Letter::Sym)
                .ok_or_else(|| Error::usage(format!("symbol {token:?} is not in the alphabet"))),
        }
    }

    pub fn letter_name(&self, letter: Letter) -> &str {
        match letter {
            Letter::LeftEnd => LEFT_END_TOKEN,
            Letter::RightEnd => RIGHT_END_TOKEN,
            Letter::Sym(s) => self.name(s),
        }
    }

    /// All letters, endmarkers included, in code order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = vec![Letter::LeftEnd];
        out.extend(self.symbols().map(Letter::Sym));
        out.push(Letter::RightEnd);
        out
    }

    fn single_chars(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word. Whitespace-separated tokens are used when the text
    /// contains whitespace; otherwise, for alphabets of one-character
    /// symbols, the text is split per character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if text.chars().any(char::is_whitespace) || !self.single_chars() {
            text.split_whitespace().map(|t| self.lookup(t)).collect()
        } else {
            let mut buf = [0u8; 4];
            text.chars().map(|c| self.lookup(c.encode_utf8(&mut buf))).collect()
        }
    }

    pub fn render_word(&self, word: &[Sym]) -> String {
        let sep = if self.single_chars() { "" } else { " " };
        word.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(sep)
    }

    pub fn check_word(&self, word: &[Sym]) -> Result<()> {
        match word.iter().find(|s| !self.contains(**s)) {
            Some(s) => Err(Error::usage(format!("symbol index {} is outside the alphabet", s.0))),
            None => Ok(()),
        }
    }

    /// Maps a word of `other` into this alphabet by symbol name.
    pub fn translate(&self, other: &Alphabet, word: &[Sym]) -> Result<Word> {
        word.iter().map(|&s| self.lookup(other.name(s))).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}

/// All words of exactly `len` symbols, in lexicographic order.
pub fn words_of_length(alphabet_len: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = if alphabet_len == 0 {
        usize::from(len == 0)
    } else {
        alphabet_len.checked_pow(len as u32).expect("word space too large")
    };
    (0..total).map(move |mut code| {
        let mut word = vec![Sym(0); len];
        for slot in word.iter_mut().rev() {
            *slot = Sym((code % alphabet_len) as u16);
            code /= alphabet_len;
        }
        word
    })
}

/// All words up to `max_len` symbols, in length-lexicographic order.
pub fn words_up_to(alphabet_len: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| words_of_length(alphabet_len, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let ab = Alphabet::new(["a", "b", "$"]).unwrap();
        let w = ab.parse_word("ab$a").unwrap();
        assert_eq!(w, vec![Sym(0), Sym(1), Sym(2), Sym(0)]);
        assert_eq!(ab.render_word(&w), "ab$a");
        assert_eq!(ab.parse_word("a b").unwrap(), vec![Sym(0), Sym(1)]);
        assert!(ab.parse_word("a>").is_err());
        assert!(ab.parse_word("c").is_err());
    }

    #[test]
    fn multi_char_symbols_need_spaces() {
        let ab = Alphabet::new(["a/x", "b"]).unwrap();
        assert_eq!(ab.parse_word("a/x b").unwrap(), vec![Sym(0), Sym(1)]);
        assert_eq!(ab.render_word(&[Sym(1), Sym(0)]), "b a/x");
    }

    #[test]
    fn reserved_tokens_rejected() {
        assert!(Alphabet::new(["<"]).is_err());
        assert!(Alphabet::new(["@"]).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
    }

    #[test]
    fn word_space_is_length_lex() {
        let all: Vec<Word> = words_up_to(2, 2).collect();
        assert_eq!(all.len(), 7);
        assert_eq!(all[0], vec![]);
        assert_eq!(all[1], vec![Sym(0)]);
        assert_eq!(all[3], vec![Sym(0), Sym(0)]);
        assert_eq!(all[6], vec![Sym(1), Sym(1)]);
    }
}
