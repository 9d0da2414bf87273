//! Shared test tables.

/// The eight rows shown for the stream-processing example, padded as in
/// the original listing.
pub(crate) const TABLE2: &str = "\
Spout_wait, Spliters, Counters, Throughput+, Latency-
10, 6, 17, 23075, 158.68
8, 6, 17, 22887, 172.74
9, 6, 17, 22799, 156.83
9, 3, 17, 22430, 160.14
10000, 1, 10, 460.81, 8761.6
10000, 1, 18, 402.53, 8797.5
10000, 1, 12, 365.07, 9098.9
10000, 1, 1, 310.06, 9421
";
