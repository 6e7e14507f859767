//! Human-readable coding transcript.

use std::fmt::Write;

use finpart::coding::{slot_space, Coder, CodingConfig, IndexedFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::suites::SuiteError;
use crate::sweep::{draw, Sampler};

pub struct Transcript {
    pub text: String,
    pub passed: bool,
}

/// A family supported by at most three points, drawn from `seed`.
pub fn sample_family(cfg: &CodingConfig, seed: u64) -> IndexedFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = IndexedFamily::empty(cfg.ground, cfg.arity);
    for slot in &cfg.slots {
        let space = slot_space(cfg, slot);
        let m = draw(&space, Sampler::Supported, 3, &mut rng);
        x.set_slice(slot.j, &slot.profile, space.tuples_of(&m).cloned());
    }
    x
}

/// Encodes `x`, decodes it back and says whether the two agree.
///
/// Materialization is attempted only when asked; if it is over budget the
/// transcript says so and stays symbolic.
pub fn demo_coding(cfg: &CodingConfig, x: &IndexedFamily, materialize: bool) -> Result<Transcript, SuiteError> {
    let coder = Coder::new(cfg.clone()).map_err(|e| SuiteError::Invalid(e.to_string()))?;
    let mut t = String::new();
    let w = &mut t;
    let _ = writeln!(w, "config: ground {}, arity {}, {} slot(s)", cfg.ground, cfg.arity, cfg.slots.len());
    for s in &cfg.slots {
        let g = cfg.top_sizes(s)?;
        let fs: Vec<String> = (0..=s.k_max()).map(|k| cfg.sizes(s, k).map(|f| f.to_string())).collect::<Result<_, _>>()?;
        let _ = writeln!(w, "  slot {s}: f(k) = {}, g = {g}", fs.join(" "));
    }
    let _ = writeln!(w, "X ({} members): {}", x.len(), serde_json::to_string(x)?);
    let (book, traces) = coder.encode_traced(x)?;
    let _ = writeln!(w, "book: {}", serde_json::to_string(&book)?);
    for tr in &traces {
        let _ = writeln!(w, "  slot {}: |δ^(k)| = {:?}, |Y_k| = {:?}", tr.slot, tr.delta_sizes, tr.y_sizes);
    }
    let residual: usize = traces.iter().map(|t| t.residual()).sum();
    let decoded = coder.decode_book(&book);
    let mut passed = residual == 0 && decoded.as_ref().is_ok_and(|y| y == x);
    match &decoded {
        Ok(y) => {
            let _ = writeln!(w, "decoded ({} members): {}", y.len(), serde_json::to_string(y)?);
        }
        Err(e) => {
            let _ = writeln!(w, "decode failed: {e}");
        }
    }
    if materialize {
        match coder.materialize(&book) {
            Ok(h) => {
                let back = coder.decode_partitions(&h);
                let ok = back.as_ref().is_ok_and(|y| y == x);
                let _ = writeln!(w, "materialized: {} partitions, partition decode {}", h.len(), if ok { "agrees" } else { "DIFFERS" });
                passed &= ok;
            }
            Err(e @ finpart::Error::Budget { .. }) => {
                let _ = writeln!(w, "materialization skipped: {e}; transcript is symbolic only");
            }
            Err(e) => return Err(e.into()),
        }
    }
    let _ = writeln!(w, "verdict: {}", if passed { "pass" } else { "FAIL" });
    Ok(Transcript { text: t, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::coding::preset;

    #[test]
    fn compact_demo_passes() {
        let cfg = preset("compact12").unwrap();
        let x = sample_family(&cfg, 1);
        let t = demo_coding(&cfg, &x, true).unwrap();
        assert!(t.passed, "{}", t.text);
        assert!(t.text.ends_with("verdict: pass\n"));
    }

    #[test]
    fn empty_family_passes() {
        let cfg = preset("compact12").unwrap();
        let t = demo_coding(&cfg, &IndexedFamily::empty(12, 1), true).unwrap();
        assert!(t.passed);
    }

    #[test]
    fn small_ground_is_invalid() {
        let mut cfg = preset("compact12").unwrap();
        cfg.ground = 4;
        assert!(matches!(demo_coding(&cfg, &IndexedFamily::empty(4, 1), false), Err(SuiteError::Invalid(_))));
    }
}
