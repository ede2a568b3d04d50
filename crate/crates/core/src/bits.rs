//! Word-level helpers for adjacency rows stored as `u64` blocks.

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Mask of the valid bits in word `w` of a row holding `bits` bits.
#[inline]
pub(crate) fn valid_mask(bits: usize, w: usize) -> u64 {
    let lo = w * WORD;
    if lo + WORD <= bits {
        u64::MAX
    } else if lo >= bits {
        0
    } else {
        (1u64 << (bits - lo)) - 1
    }
}

#[inline]
pub(crate) fn test(row: &[u64], i: usize) -> bool {
    (row[i / WORD] >> (i % WORD)) & 1 == 1
}

#[inline]
pub(crate) fn set(row: &mut [u64], i: usize) {
    row[i / WORD] |= 1u64 << (i % WORD);
}

#[inline]
pub(crate) fn clear(row: &mut [u64], i: usize) {
    row[i / WORD] &= !(1u64 << (i % WORD));
}

/// Copies bits `[lo, lo + len)` of `row` into `out`, shifted down to bit 0.
/// `out` must hold at least `words_for(len)` words; the unused high bits are zeroed.
pub(crate) fn extract_range(row: &[u64], lo: usize, len: usize, out: &mut [u64]) {
    let n_out = words_for(len);
    let shift = lo % WORD;
    let base = lo / WORD;
    for (k, slot) in out.iter_mut().enumerate().take(n_out) {
        let w = base + k;
        let low = row.get(w).copied().unwrap_or(0) >> shift;
        let high = if shift == 0 {
            0
        } else {
            row.get(w + 1).copied().unwrap_or(0) << (WORD - shift)
        };
        *slot = (low | high) & valid_mask(len, k);
    }
}

/// Iterator over the set bit positions of a row, ascending.
pub(crate) struct Ones<'a> {
    row: &'a [u64],
    w: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(row: &'a [u64]) -> Self {
        let cur = row.first().copied().unwrap_or(0);
        Ones { row, w: 0, cur }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.w * WORD + tz);
            }
            self.w += 1;
            if self.w >= self.row.len() {
                return None;
            }
            self.cur = self.row[self.w];
        }
    }
}
