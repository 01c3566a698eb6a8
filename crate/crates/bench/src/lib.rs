//! Fixtures shared by the criterion benches.

use fifteen_core::bench::{load_dataset, Dataset};

/// Built-in dataset restricted to the given ids.
pub fn subset(name: &str, ids: &[u32]) -> Dataset {
    let mut ds = load_dataset(name).expect("built-in dataset");
    ds.instances.retain(|inst| ids.contains(&inst.id));
    ds
}
