use std::fs;
use std::path::Path;

use crate::evolve::read_checkpoint;
use crate::spectral::Field;
use crate::{Error, Result};

/// Name of the file listing checkpoint files in sequence order.
pub const INDEX_FILE: &str = "index.txt";

/// Loads a sequence stored as checkpoint files listed, one per line, in
/// `dir/index.txt`. Blank lines and lines starting with `#` are skipped.
pub fn load_sequence(dir: &Path) -> Result<Vec<Field>> {
    let index = fs::read_to_string(dir.join(INDEX_FILE))?;
    let mut out: Vec<Field> = Vec::new();
    for line in index
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let grid = out.first().map(|f| f.grid().clone());
        out.push(read_checkpoint(&dir.join(line), grid.as_ref())?);
    }
    if out.is_empty() {
        return Err(Error::Domain(format!(
            "{} lists no checkpoints",
            dir.join(INDEX_FILE).display()
        )));
    }
    Ok(out)
}

/// Writes `seq` as `elem_0000.bin`, ... plus the index file.
pub fn write_sequence(dir: &Path, seq: &[Field]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut index = String::new();
    for (i, f) in seq.iter().enumerate() {
        let name = format!("elem_{i:04}.bin");
        crate::evolve::write_checkpoint(&dir.join(&name), f)?;
        index.push_str(&name);
        index.push('\n');
    }
    fs::write(dir.join(INDEX_FILE), index)?;
    Ok(())
}
