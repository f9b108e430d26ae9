use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rug::Integer;
use sha2::{Digest, Sha256};

use super::charpoly::{char_poly, CharPolyRecord};
use crate::error::{Error, Result};

const MAGIC: &str = "pascal-charpoly v1";

/// Directory of `charpoly_L<L>.txt` files.
///
/// Layout: a header line `pascal-charpoly v1 L=<L>`, the coefficients
/// c_0..c_L one per line, and a trailer `sha256=<hex>` over the preceding
/// lines (each terminated by `\n`). Writes go to a temporary file that is
/// renamed into place, so readers see either the old or the new file.
#[derive(Clone, Debug)]
pub struct CharPolyCache {
    dir: PathBuf,
}

impl CharPolyCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, l: usize) -> PathBuf {
        self.dir.join(format!("charpoly_L{l}.txt"))
    }

    pub fn contains(&self, l: usize) -> bool {
        self.path_for(l).is_file()
    }

    pub fn store(&self, record: &CharPolyRecord) -> Result<PathBuf> {
        record.validate()?;
        fs::create_dir_all(&self.dir)?;
        let body = render_body(record);
        let contents = format!("{body}sha256={}\n", digest(&body));
        let path = self.path_for(record.l);
        let tmp = self.dir.join(format!(".charpoly_L{}.txt.tmp{}", record.l, std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(contents.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Loads and validates a record. Invariants are checked before the
    /// checksum, so an edited coefficient that breaks the symmetry reports
    /// an invariant violation; edits that keep it are caught by the checksum.
    pub fn load(&self, l: usize) -> Result<CharPolyRecord> {
        let path = self.path_for(l);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(Error::MissingEntry(l)),
            Err(e) => return Err(e.into()),
        };
        let shown = path.display().to_string();
        let malformed = |reason: String| Error::MalformedCache { path: shown.clone(), reason };
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() != l + 3 {
            return Err(malformed(format!("expected {} lines, found {}", l + 3, lines.len())));
        }
        if lines[0] != format!("{MAGIC} L={l}") {
            return Err(malformed(format!("unexpected header {:?}", lines[0])));
        }
        let coeffs = lines[1..=l + 1]
            .iter()
            .map(|s| s.parse::<Integer>().map_err(|_| malformed(format!("bad coefficient {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let stored = lines[l + 2]
            .strip_prefix("sha256=")
            .ok_or_else(|| malformed("missing checksum trailer".into()))?;
        let record = CharPolyRecord { l, coeffs };
        record.validate()?;
        let body: String = lines[..=l + 1].iter().map(|s| format!("{s}\n")).collect();
        let computed = digest(&body);
        if computed != stored {
            return Err(Error::ChecksumMismatch { path: shown, stored: stored.to_string(), computed });
        }
        Ok(record)
    }

    /// Cached record, computing and storing it on a miss. Returns whether
    /// the entry was already present.
    pub fn load_or_compute(&self, l: usize) -> Result<(CharPolyRecord, bool)> {
        match self.load(l) {
            Ok(r) => Ok((r, true)),
            Err(Error::MissingEntry(_)) => {
                let r = char_poly(l)?;
                self.store(&r)?;
                Ok((r, false))
            }
            Err(e) => Err(e),
        }
    }
}

fn render_body(record: &CharPolyRecord) -> String {
    let mut s = format!("{MAGIC} L={}\n", record.l);
    for c in &record.coeffs {
        s.push_str(&c.to_string());
        s.push('\n');
    }
    s
}

fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_missing() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CharPolyCache::new(dir.path());
        let rec = char_poly(2).unwrap();
        cache.store(&rec).unwrap();
        assert_eq!(cache.load(2).unwrap(), rec);
        assert!(matches!(cache.load(3), Err(Error::MissingEntry(3))));
        let text = fs::read_to_string(cache.path_for(2)).unwrap();
        assert!(text.starts_with("pascal-charpoly v1 L=2\n1\n-3\n1\nsha256="));
    }
}
