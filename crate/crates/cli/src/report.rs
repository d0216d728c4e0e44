use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use pbd_core::{BoundValue, Rational};

/// `p/q (≈ x.xxxxxx)`, or just `p` for integers.
pub fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("{r} (≈ {:.6})", r.to_f64().unwrap_or(f64::NAN))
    }
}

pub fn bound(b: &BoundValue) -> String {
    rational(&b.exact)
}

/// `size x count` pairs, e.g. `2x3 3x4`.
pub fn histogram<K: std::fmt::Display, V: std::fmt::Display>(h: &BTreeMap<K, V>) -> String {
    h.iter().map(|(k, v)| format!("{k}x{v}")).collect::<Vec<_>>().join(" ")
}

pub fn count_values(values: &[u64]) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for &v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}
