//! On-disk persistence of the per-degree echelon data. The file format is
//! private to this crate and versioned; a file with an unknown version or a
//! different genus is ignored.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Echelon, RingContext};
use crate::error::{Error, Result};
use crate::exact_arith::{fmt_rational, parse_rational};

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    genus: usize,
    degrees: Vec<DegreeEntry>,
}

#[derive(Serialize, Deserialize)]
struct DegreeEntry {
    k: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<String>>,
}

impl RingContext {
    /// Path of the cache file for this genus inside `dir`.
    pub fn cache_path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("echelon-g{}-v{}.json", self.genus, CACHE_FORMAT_VERSION))
    }

    /// Serializes every cached degree.
    pub fn export_cache(&self) -> String {
        let cache = self.cache.read().expect("echelon cache poisoned");
        let mut degrees: Vec<DegreeEntry> = cache
            .iter()
            .map(|(&k, e)| DegreeEntry {
                k,
                pivots: e.pivots.clone(),
                rows: e.rows.iter().map(|r| r.iter().map(fmt_rational).collect()).collect(),
            })
            .collect();
        degrees.sort_by_key(|d| d.k);
        let file = CacheFile { version: CACHE_FORMAT_VERSION, genus: self.genus, degrees };
        serde_json::to_string(&file).expect("cache serializes")
    }

    /// Loads degrees from a string produced by [`export_cache`]. Returns the
    /// number of degrees imported.
    ///
    /// [`export_cache`]: RingContext::export_cache
    pub fn import_cache(&self, text: &str) -> Result<usize> {
        let file: CacheFile = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("cache file: {e}")))?;
        if file.version != CACHE_FORMAT_VERSION || file.genus != self.genus {
            return Ok(0);
        }
        let mut imported = Vec::with_capacity(file.degrees.len());
        for d in file.degrees {
            let columns = Self::degree_columns(d.k);
            let rows = d
                .rows
                .iter()
                .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            if rows.len() != d.pivots.len()
                || rows.iter().any(|r| r.len() != columns.len())
                || d.pivots.iter().any(|&p| p >= columns.len())
            {
                return Err(Error::Malformed(format!("cache entry for degree {} is inconsistent", d.k)));
            }
            imported.push((d.k, Arc::new(Echelon::from_parts(columns, rows, d.pivots))));
        }
        let n = imported.len();
        let mut cache = self.cache.write().expect("echelon cache poisoned");
        for (k, e) in imported {
            cache.entry(k).or_insert(e);
        }
        Ok(n)
    }

    /// Imports the cache file in `dir` if present. Unreadable or stale files
    /// are treated as absent.
    pub fn load_cache_dir(&self, dir: &Path) -> usize {
        std::fs::read_to_string(self.cache_path(dir)).ok().and_then(|text| self.import_cache(&text).ok()).unwrap_or(0)
    }

    /// Writes the cache file into `dir`, creating the directory if needed.
    pub fn save_cache_dir(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let path = self.cache_path(dir);
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, self.export_cache())?;
        std::fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use crate::chow_ring::RingContext;
    use crate::poly::{Polynomial, VarSet};

    #[test]
    fn round_trip_through_text() {
        let a = RingContext::new(3).unwrap();
        for k in 0..=5 {
            a.dim_graded(k, None);
        }
        let text = a.export_cache();
        let b = RingContext::new(3).unwrap();
        assert_eq!(b.import_cache(&text).unwrap(), 6);
        let p = Polynomial::parse(&VarSet::canonical(), "P^4 + xi*T1*P^2 - T2^3").unwrap();
        assert_eq!(a.normal_form(&p).unwrap(), b.normal_form(&p).unwrap());
        // wrong genus is ignored
        let c = RingContext::new(4).unwrap();
        assert_eq!(c.import_cache(&text).unwrap(), 0);
        assert!(c.import_cache("not json").is_err());
    }

    #[test]
    fn round_trip_through_dir() {
        let dir = std::env::temp_dir().join(format!("chowkit-cache-test-{}", std::process::id()));
        let a = RingContext::new(2).unwrap();
        a.dim_graded(3, None);
        a.save_cache_dir(&dir).unwrap();
        let b = RingContext::new(2).unwrap();
        assert_eq!(b.load_cache_dir(&dir), 1);
        std::fs::remove_dir_all(&dir).ok();
    }
}
