//! Whole-file atomic writes into an output directory.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

/// Writes every `(file name, contents)` pair into `dir`.
///
/// Each file is written to a temporary sibling and renamed into place. If any
/// write fails, files already placed by this call are removed again.
pub fn write_files(dir: &Path, files: &[(String, String)]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let target = dir.join(name);
        match write_one(dir, &target, contents) {
            Ok(()) => written.push(target),
            Err(e) => {
                for path in &written {
                    let _ = fs::remove_file(path);
                }
                return Err(e);
            }
        }
    }
    Ok(written)
}

fn write_one(dir: &Path, target: &Path, contents: &str) -> io::Result<()> {
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    // Temporary files are created owner-only; results are meant to be shared.
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(target).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_batch_leaves_nothing_behind() {
        let dir = tempfile::tempdir().unwrap();
        // A directory squatting on the second name makes its rename fail.
        fs::create_dir(dir.path().join("b.csv")).unwrap();
        fs::write(dir.path().join("b.csv").join("keep"), "x").unwrap();
        let files = [
            ("a.csv".to_owned(), "1\n".to_owned()),
            ("b.csv".to_owned(), "2\n".to_owned()),
        ];
        assert!(write_files(dir.path(), &files).is_err());
        assert!(!dir.path().join("a.csv").exists());
        let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }

    #[test]
    fn writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let files = [("x.csv".to_owned(), "h\n".to_owned())];
        let paths = write_files(&dir.path().join("nested"), &files).unwrap();
        assert_eq!(fs::read_to_string(&paths[0]).unwrap(), "h\n");
    }
}
