//! Dense bitsets over the fact universe of a case base.

use smallvec::SmallVec;

const WORD_BITS: usize = 64;

/// A set of fact indices. Indices refer to positions in the case base's
/// fact table; the set itself does not know the universe size.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FactSet {
    words: SmallVec<[u64; 2]>,
}

impl FactSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut set = Self::new();
        for ix in indices {
            set.insert(ix);
        }
        set
    }

    /// Set with bits `0..n` for the low word only. Used by the enumerator
    /// where the universe is tiny.
    pub(crate) fn from_bits(bits: u64) -> Self {
        let mut set = Self::new();
        if bits != 0 {
            set.words.push(bits);
        }
        set
    }

    pub fn insert(&mut self, ix: usize) {
        let word = ix / WORD_BITS;
        if self.words.len() <= word {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1 << (ix % WORD_BITS);
    }

    pub fn contains(&self, ix: usize) -> bool {
        self.words
            .get(ix / WORD_BITS)
            .is_some_and(|w| w & (1 << (ix % WORD_BITS)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..WORD_BITS)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| wi * WORD_BITS + b)
        })
    }

    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    pub fn is_subset(&self, other: &FactSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.word(i) == 0)
    }

    /// `self ∩ mask ⊆ other ∩ mask`
    pub fn is_subset_within(&self, other: &FactSet, mask: &FactSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & mask.word(i) & !other.word(i) == 0)
    }

    /// Canonical form without trailing zero words, so equal sets hash equal.
    pub(crate) fn normalized(mut self) -> Self {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
    }
}

impl std::fmt::Debug for FactSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for FactSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::from_indices(iter)
    }
}
