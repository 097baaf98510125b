/// `chi + 3g - 3 + n`: expected dimension of the space of genus `g` maps with
/// `n` markings, where `chi` is the Euler characteristic of the pulled-back
/// tangent bundle.
pub fn expected_dimension(genus: u64, markings: u64, chi: i64) -> i64 {
    chi + 3 * genus as i64 - 3 + markings as i64
}

/// Genus zero maps to a toric variety, whose log tangent bundle is trivial of
/// rank `dim`: `dim + n - 3`.
pub fn toric_expected_dimension(dim: u64, markings: u64) -> i64 {
    dim as i64 + markings as i64 - 3
}
