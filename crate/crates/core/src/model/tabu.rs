/// Read access to an ant's visited-city memory.
///
/// Selection routines are generic over this so the packed [`VisitedSet`] can be
/// checked step for step against a plain `[bool]` reference.
pub trait Tabu {
    fn len(&self) -> usize;
    fn is_visited(&self, city: usize) -> bool;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn unvisited(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&c| !self.is_visited(c))
    }
}

impl Tabu for [bool] {
    fn len(&self) -> usize {
        <[bool]>::len(self)
    }

    fn is_visited(&self, city: usize) -> bool {
        self[city]
    }
}

impl Tabu for Vec<bool> {
    fn len(&self) -> usize {
        <[bool]>::len(self)
    }

    fn is_visited(&self, city: usize) -> bool {
        self[city]
    }
}

const WORD_BITS: usize = u32::BITS as usize;

/// Tabu list packed into 32-bit words: city `c` lives in bit `c % 32` of word
/// `c / 32`; a set bit means visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitedSet {
    n: usize,
    words: Vec<u32>,
}

impl VisitedSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            words: vec![0; n.div_ceil(WORD_BITS)],
        }
    }

    pub fn insert(&mut self, city: usize) -> bool {
        assert!(city < self.n, "city {city} out of range for {} cities", self.n);
        let (w, b) = (city / WORD_BITS, city % WORD_BITS);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.n
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }
}

impl Tabu for VisitedSet {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn is_visited(&self, city: usize) -> bool {
        self.words[city / WORD_BITS] >> (city % WORD_BITS) & 1 == 1
    }

    /// Walks clear bits word by word, skipping full words.
    fn unvisited(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        self.words.iter().enumerate().flat_map(move |(w, &word)| {
            let mut free = !word;
            std::iter::from_fn(move || {
                if free == 0 {
                    return None;
                }
                let b = free.trailing_zeros() as usize;
                free &= free - 1;
                Some(w * WORD_BITS + b)
            })
            .take_while(move |&c| c < n)
        })
    }
}
