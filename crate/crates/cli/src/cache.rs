//! Optional on-disk cyclotomic cache under `QCONG_CACHE_DIR`.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use qcong::cyclotomic::FrozenCyclotomics;
use qcong::CyclotomicCache;

const FILE_NAME: &str = "cyclotomic.tsv";

fn cache_path() -> Option<PathBuf> {
    std::env::var_os("QCONG_CACHE_DIR").map(|d| Path::new(&d).join(FILE_NAME))
}

fn load(path: &Path) -> CyclotomicCache {
    let Ok(file) = File::open(path) else {
        return CyclotomicCache::new();
    };
    CyclotomicCache::read_tsv(BufReader::new(file)).unwrap_or_else(|e| {
        eprintln!("warning: ignoring cache {}: {e}", path.display());
        CyclotomicCache::new()
    })
}

fn store(cache: &CyclotomicCache, path: &Path) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tsv.tmp");
    let mut w = BufWriter::new(File::create(&tmp)?);
    cache.write_tsv(&mut w)?;
    w.flush()?;
    drop(w);
    fs::rename(&tmp, path)
}

/// Cyclotomic table covering `ns`, read from and written back to the cache
/// file when one is configured.
pub fn prepare(ns: &[u64]) -> FrozenCyclotomics {
    let path = cache_path();
    let mut cache = path.as_deref().map_or_else(CyclotomicCache::new, load);
    let before = cache.len();
    cache.warm_up(ns.iter().copied());
    if let Some(path) = path {
        if cache.len() != before {
            if let Err(e) = store(&cache, &path) {
                eprintln!("warning: could not write cache {}: {e}", path.display());
            }
        }
    }
    cache.freeze()
}
