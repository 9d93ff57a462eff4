//! Criterion benchmarks for the catstat engines; see `benches/`.

use catstat_core::funceq::{builtin_spec, FuncRecSpec};
use catstat_core::{Family, Pattern};

/// Built-in recurrence for a statistic, panicking on an unknown pair.
pub fn spec(family: Family, stat: &str) -> FuncRecSpec {
    let p: Pattern = stat.parse().expect("pattern");
    builtin_spec(family, &p).expect("catalog entry")
}
