"""Subsets of a fixed ground set 0..n-1 stored as int bitmasks."""


def mask_from(indices):
    """Bitmask with the given element indices set."""
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bit_indices(mask):
    """Yield the set element indices of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask):
    """The set element indices of ``mask`` as a list, ascending."""
    return list(bit_indices(mask))
