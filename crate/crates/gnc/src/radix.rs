//! Mixed-radix packing of value tuples into table indices. The first
//! position is most significant, matching the direct-product element order.

/// Packs a tuple into an index; `radices[i]` is the alphabet size of
/// position i.
pub fn pack(tuple: &[usize], radices: &[usize]) -> usize {
    debug_assert_eq!(tuple.len(), radices.len());
    tuple.iter().zip(radices).fold(0, |acc, (&v, &r)| {
        debug_assert!(v < r);
        acc * r + v
    })
}

/// Inverse of `pack`.
pub fn unpack(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

/// Product of the radices, i.e. the table size.
pub fn domain_size(radices: &[usize]) -> usize {
    radices.iter().product()
}
