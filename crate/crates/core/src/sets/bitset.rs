/// Dense bit array of reachable subset sums, bit `s` set iff some subset of
/// the elements added so far sums to `s`.
#[derive(Clone, Debug)]
pub(crate) struct ReachableSums {
    words: Vec<u64>,
    max_sum: u64,
}

impl ReachableSums {
    /// Only the empty sum, with room for sums up to `capacity`.
    pub fn new(capacity: u64) -> Self {
        let mut sums = ReachableSums {
            words: Vec::new(),
            max_sum: 0,
        };
        sums.reset(capacity);
        sums
    }

    /// Reuse the allocation for a fresh run.
    pub fn reset(&mut self, capacity: u64) {
        let len = (capacity / 64 + 1) as usize;
        self.words.clear();
        self.words.resize(len, 0);
        self.words[0] = 1;
        self.max_sum = 0;
    }

    pub fn contains(&self, s: u64) -> bool {
        s <= self.max_sum && (self.words[(s / 64) as usize] >> (s % 64)) & 1 == 1
    }

    /// OR in the copy shifted by `a`. Returns the smallest sum reachable
    /// both before and after the shift (a collision), if any.
    pub fn add_element(&mut self, a: u64) -> Option<u64> {
        let q = (a / 64) as usize;
        let r = (a % 64) as u32;
        let new_max = self.max_sum + a;
        let hi = (new_max / 64) as usize;
        let mut collision = None;
        // Descending: every source word is read before it is overwritten.
        for w in (q..=hi).rev() {
            let lo_word = self.words[w - q];
            let shifted = if r == 0 {
                lo_word
            } else {
                let carry = if w > q {
                    self.words[w - q - 1] >> (64 - r)
                } else {
                    0
                };
                (lo_word << r) | carry
            };
            let hit = shifted & self.words[w];
            if hit != 0 {
                collision = Some(w as u64 * 64 + hit.trailing_zeros() as u64);
            }
            self.words[w] |= shifted;
        }
        self.max_sum = new_max;
        collision
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}
