//! Fixtures shared by the benchmarks.

use multishift_core::{MultShift, Pattern, ShiftSpec, SpacingSpec, Word};

/// Base shifts with distinct graph shapes: mixing, periodic, one-way, and a
/// memory-3 SFT.
pub fn sft_fixtures() -> Vec<(&'static str, ShiftSpec)> {
    [
        ("golden_mean", &["11"][..]),
        ("alternating", &["00", "11"][..]),
        ("one_way", &["01"][..]),
        ("memory_three", &["000", "111", "0101"][..]),
    ]
    .into_iter()
    .map(|(name, f)| (name, ShiftSpec::sft(2, f).expect("valid fixture")))
    .collect()
}

pub fn cofinite_spacing() -> ShiftSpec {
    SpacingSpec::cofinite([1, 2]).expect("valid fixture").into()
}

pub fn golden_mean(l: u64) -> MultShift {
    MultShift::new(ShiftSpec::sft(2, &["11"]).expect("valid fixture"), l).expect("l >= 2")
}

pub fn block(s: &str) -> Pattern {
    Pattern::block(&s.parse::<Word>().expect("binary literal"))
}
