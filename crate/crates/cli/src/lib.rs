//! Batch front end for `casimir-core`.
//!
//! A scene is described in JSON (see `schema/scene.schema.json`), validated by
//! [`parse_config`] and executed by [`run`], which returns CSV text.

pub mod config;
pub mod run;

pub use config::{parse_config, ConfigError, ConfigErrors, SceneConfig, Task};
pub use run::{run, Outcome, RunError};

/// Worker thread count: explicit flag, then `CASIMIR_THREADS`, then `None`
/// (rayon's default).
pub fn thread_count(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>, String> {
    if let Some(n) = flag {
        return if n == 0 { Err("--threads must be >= 1".into()) } else { Ok(Some(n)) };
    }
    match env.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("CASIMIR_THREADS must be a positive integer, got \"{s}\"")),
        },
    }
}
