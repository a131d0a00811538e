use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// A file written under `<path>.partial` and renamed into place by
/// [`commit`](Output::commit). Dropping it uncommitted leaves the partial file.
pub struct Output {
    path: PathBuf,
    partial: PathBuf,
    file: BufWriter<File>,
}

impl Output {
    pub fn create(path: &Path) -> io::Result<Self> {
        let mut partial = path.as_os_str().to_owned();
        partial.push(".partial");
        let partial = PathBuf::from(partial);
        let file = BufWriter::new(File::create(&partial)?);
        Ok(Self {
            path: path.to_owned(),
            partial,
            file,
        })
    }

    pub fn commit(mut self) -> io::Result<()> {
        self.file.flush()?;
        fs::rename(&self.partial, &self.path)
    }
}

impl Write for Output {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.file.write(buf)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.file.flush()
    }
}

/// Writes `path` through a partial file in one go.
pub fn write_file(path: &Path, f: impl FnOnce(&mut Output) -> anyhow::Result<()>) -> anyhow::Result<()> {
    let mut out = Output::create(path).map_err(|e| anyhow::anyhow!("creating {}: {e}", path.display()))?;
    f(&mut out)?;
    out.commit().map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))
}
