pub mod bounds;
pub mod dimension;
pub mod duality;
pub mod ff;
pub mod grassmann;
pub mod maximal;

use std::path::{Path, PathBuf};

use crate::{CliError, Ctx};

/// Resolve a path from a config relative to the config file's directory.
pub(crate) fn resolve(ctx: &Ctx, p: &Path) -> PathBuf {
    match &ctx.config_dir {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

pub(crate) fn open(ctx: &Ctx, p: &Path) -> Result<std::fs::File, CliError> {
    let path = resolve(ctx, p);
    std::fs::File::open(&path).map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))
}

pub(crate) fn required<T>(v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
}
