//! Fixed-width bit set over job indices `0..n`.

use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

/// A set of jobs, stored as a bit vector sized to the instance.
///
/// Up to 128 jobs fit inline without allocation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JobSet {
    words: SmallVec<[u64; 2]>,
}

impl JobSet {
    pub fn empty(n: usize) -> Self {
        JobSet {
            words: SmallVec::from_elem(0, n.div_ceil(WORD).max(1)),
        }
    }

    pub fn from_jobs(n: usize, jobs: impl IntoIterator<Item = usize>) -> Self {
        let mut set = JobSet::empty(n);
        for j in jobs {
            set.insert(j);
        }
        set
    }

    #[inline]
    pub fn contains(&self, job: usize) -> bool {
        self.words
            .get(job / WORD)
            .is_some_and(|w| w & (1u64 << (job % WORD)) != 0)
    }

    #[inline]
    pub fn insert(&mut self, job: usize) {
        self.words[job / WORD] |= 1u64 << (job % WORD);
    }

    pub fn with(&self, job: usize) -> Self {
        let mut out = self.clone();
        out.insert(job);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        JobSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        JobSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Jobs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD + bit)
            })
        })
    }

    /// Jobs in `0..n` not in the set, ascending.
    pub fn complement(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..n).filter(move |&j| !self.contains(j))
    }
}

impl fmt::Debug for JobSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for JobSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, j) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}
