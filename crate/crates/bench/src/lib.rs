//! Fixtures shared by the criterion benches.

/// Flops and flips with their preferred twist for round-trip timing.
pub const ROUNDTRIP_CASES: &[(&str, i64)] = &[("1,1;1,1", 3), ("1,2;1,1,1", 3), ("1,2,3;1,5", 4), ("1,1;2,1", 3)];

/// Weighted projective spaces for Čech sweeps.
pub const PROJECTIVE: &[&str] = &["1,1,2;", "1,2,3;", "1,1,1,1;"];
