use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiset of 0-based indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexMultiset {
    counts: BTreeMap<usize, usize>,
}

impl IndexMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from a list in which repeated entries add multiplicity.
    pub fn from_indices(idx: &[usize]) -> Self {
        let mut m = Self::new();
        for &i in idx {
            m.add(i, 1);
        }
        m
    }

    pub fn add(&mut self, index: usize, times: usize) {
        if times > 0 {
            *self.counts.entry(index).or_insert(0) += times;
        }
    }

    pub fn multiplicity(&self, index: usize) -> usize {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn is_set(&self) -> bool {
        self.max_multiplicity() <= 1
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    /// Indices in nondecreasing order, copies of a repeated index adjacent.
    pub fn expand(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&i, &c)| std::iter::repeat_n(i, c))
            .collect()
    }

    pub fn check_bound(&self, n: usize) -> Result<()> {
        match self.counts.keys().next_back() {
            Some(&i) if i >= n => Err(Error::IndexOutOfRange { index: i, n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for IndexMultiset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut m = Self::new();
        for i in iter {
            m.add(i, 1);
        }
        m
    }
}

/// Ordered partition of `0..n` into `r` labelled blocks; index `i` lies in
/// block `assign[i]`. Empty blocks are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Paving {
    n: usize,
    r: usize,
    assign: Vec<usize>,
}

impl Paving {
    pub fn new(r: usize, assign: Vec<usize>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("paving needs at least one block".into()));
        }
        if let Some(&b) = assign.iter().find(|&&b| b >= r) {
            return Err(Error::IndexOutOfRange { index: b, n: r });
        }
        Ok(Paving {
            n: assign.len(),
            r,
            assign,
        })
    }

    /// Single block containing everything.
    pub fn trivial(n: usize, r: usize) -> Self {
        Paving {
            n,
            r: r.max(1),
            assign: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.assign[i]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut b = vec![Vec::new(); self.r];
        for (i, &k) in self.assign.iter().enumerate() {
            b[k].push(i);
        }
        b
    }

    /// Relabels indices: index `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut assign = vec![0; self.n];
        for (i, &p) in perm.iter().enumerate() {
            assign[p] = self.assign[i];
        }
        Paving {
            n: self.n,
            r: self.r,
            assign,
        }
    }
}
