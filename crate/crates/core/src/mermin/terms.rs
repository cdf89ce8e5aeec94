use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Letter {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BellTerm {
    pub letters: [Letter; 5],
    pub sign: i8,
}

impl BellTerm {
    pub fn word(&self) -> String {
        self.letters.iter().map(|l| if *l == Letter::X { 'X' } else { 'Y' }).collect()
    }

    pub fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::Y).count()
    }
}

impl fmt::Display for BellTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.sign > 0 { '+' } else { '-' }, self.word())
    }
}

/// The 16 terms in lexicographic letter order: `XXXXX` (+1), the ten
/// two-`Y` words (-1) and the five four-`Y` words (+1).
pub fn enumerate_terms() -> Vec<BellTerm> {
    let mut terms = Vec::with_capacity(16);
    for mask in 0u32..32 {
        let letters: [Letter; 5] = std::array::from_fn(|k| if mask >> (4 - k) & 1 == 1 { Letter::Y } else { Letter::X });
        let sign = match mask.count_ones() {
            0 | 4 => 1,
            2 => -1,
            _ => continue,
        };
        terms.push(BellTerm { letters, sign });
    }
    terms
}
