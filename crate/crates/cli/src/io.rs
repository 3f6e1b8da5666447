use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{CliResult, ResultExt};

/// Write `contents` to a temporary sibling, then rename it over `path`, so
/// readers never see a half-written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Emits whole lines only: each line and its newline go out in a single
/// `write_all`.
pub struct LineSink<W: Write> {
    inner: W,
    flush_each: bool,
    buf: String,
}

impl<W: Write> LineSink<W> {
    pub fn new(inner: W) -> Self {
        Self {
            inner,
            flush_each: false,
            buf: String::new(),
        }
    }

    /// Flush after every line, for interactive peers.
    pub fn interactive(inner: W) -> Self {
        Self {
            flush_each: true,
            ..Self::new(inner)
        }
    }

    pub fn line(&mut self, line: &str) -> io::Result<()> {
        self.buf.clear();
        self.buf.push_str(line);
        self.buf.push('\n');
        self.inner.write_all(self.buf.as_bytes())?;
        if self.flush_each {
            self.inner.flush()?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Output file, or stdout when `path` is `None`.
pub fn open_output(path: Option<&Path>) -> CliResult<LineSink<Box<dyn Write>>> {
    let w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).or_usage(format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    Ok(LineSink::new(w))
}

/// Input file, or stdin for `-`.
pub fn open_input(path: &Path) -> CliResult<Box<dyn BufRead>> {
    if path == Path::new("-") {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).or_usage(format!("opening {}", path.display()))?;
    Ok(Box::new(BufReader::new(f)))
}

/// Lines of `r` without their terminators. Invalid UTF-8 is replaced
/// rather than ending the stream, so one bad line stays one bad line.
pub fn lines_lossy<R: BufRead>(mut r: R) -> impl Iterator<Item = io::Result<String>> {
    let mut buf = Vec::new();
    std::iter::from_fn(move || {
        buf.clear();
        match r.read_until(b'\n', &mut buf) {
            Ok(0) => None,
            Ok(_) => {
                if buf.last() == Some(&b'\n') {
                    buf.pop();
                    if buf.last() == Some(&b'\r') {
                        buf.pop();
                    }
                }
                Some(Ok(String::from_utf8_lossy(&buf).into_owned()))
            }
            Err(e) => Some(Err(e)),
        }
    })
}
