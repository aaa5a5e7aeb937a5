use std::io::{self, Write};
use std::path::Path;

use svfield::principles::SingularField;

/// Shortest decimal that parses back to the same `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

/// CSV with header `re,im,s<k>...,flag`; flagged rows leave the value cells empty.
pub fn field_csv(field: &SingularField, ks: &[usize]) -> String {
    let mut out = String::from("re,im");
    for k in ks {
        out.push_str(&format!(",s{k}"));
    }
    out.push_str(",flag\n");
    for (i, z) in field.points().iter().enumerate() {
        out.push_str(&format_f64(z.re));
        out.push(',');
        out.push_str(&format_f64(z.im));
        let values = field.values(i);
        for &k in ks {
            out.push(',');
            if let Some(s) = values {
                out.push_str(&format_f64(s[k - 1]));
            }
        }
        out.push_str(if values.is_some() { ",0\n" } else { ",1\n" });
    }
    out
}

/// Writes through a temporary file in the target directory, renamed into
/// place only once the contents are complete.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes `contents` to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, contents: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(contents)?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_formatting() {
        assert_eq!(format_f64(1.0), "1.0");
        assert_eq!(format_f64(-0.5), "-0.5");
        assert_eq!(format_f64(1e-20), "1e-20");
        for v in [0.1 + 0.2, std::f64::consts::PI, 6.02214076e23, -3.3e-300] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"first").unwrap();
        write_atomic(&p, b"second").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
