use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

/// A file produced by a subcommand, held in memory until everything succeeded.
pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: impl Into<Vec<u8>>) -> Self {
        Self {
            name: name.into(),
            contents: contents.into(),
        }
    }
}

/// Writes every artifact into `dir`.
///
/// All contents go to temporary files in the target directory first; they
/// are renamed into place only once every temporary file is complete.
pub fn write_atomically(dir: &Path, artifacts: &[Artifact]) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut staged = Vec::with_capacity(artifacts.len());
    for artifact in artifacts {
        let mut tmp = NamedTempFile::new_in(dir)?;
        tmp.write_all(&artifact.contents)?;
        tmp.as_file().sync_all()?;
        staged.push((tmp, dir.join(&artifact.name)));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| e.error)?;
        written.push(target);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("nested");
        let files = write_atomically(&out, &[Artifact::new("a.txt", "x"), Artifact::new("b.txt", "y")]).unwrap();
        assert_eq!(files.len(), 2);
        assert_eq!(fs::read_to_string(out.join("b.txt")).unwrap(), "y");
        assert_eq!(fs::read_dir(&out).unwrap().count(), 2);
    }
}
