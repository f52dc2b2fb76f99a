//! Small shared helpers: worker-pool setup, seed derivation, float formatting.

use std::sync::OnceLock;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// Worker pool shared by the projection and convolution kernels.
///
/// Sized from `TRIDONET_THREADS` (cap), falling back to the machine's
/// available parallelism. Built once; later changes to the env var have
/// no effect.
pub fn pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let avail = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        let n = match std::env::var("TRIDONET_THREADS") {
            Ok(s) => s.parse::<usize>().ok().filter(|&n| n > 0).unwrap_or(avail),
            Err(_) => avail,
        };
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
    })
}

/// Deterministic RNG for a named purpose under a run seed.
///
/// Streams keep draws for one purpose (phantoms, masks, model init, epoch
/// shuffles, ...) independent of draw counts elsewhere.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream ids for [`seeded_rng`].
pub mod streams {
    pub const PHANTOM: u64 = 1;
    pub const MASK: u64 = 2;
    pub const NOISE: u64 = 3;
    pub const MODEL_INIT: u64 = 4;
    pub const SHUFFLE: u64 = 5;
    pub const FEATURES: u64 = 6;
}

/// Fixed-format float for CSV/JSON reports: deterministic across runs,
/// `inf` sentinel for infinities.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.6}")
    }
}

/// Relative L2 distance ‖a−b‖ / max(‖a‖, tiny).
pub fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.iter().zip(b) {
        num += (x - y) * (x - y);
        den += x * x;
    }
    (num / den.max(1e-300)).sqrt()
}
