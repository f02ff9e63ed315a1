//! File formats, default grids and batch runners for the `oddbal` command
//! line tool. The numerics live in `oddbal-core`.

pub mod grids;
pub mod io;
pub mod runs;

/// Environment variable read for the worker thread count.
pub const THREADS_ENV: &str = "ODDBAL_THREADS";

/// Sizes the global rayon pool from [`THREADS_ENV`] when it holds a positive
/// integer. Later calls are no-ops.
pub fn configure_threads() {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}
