use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use super::{BaselineError, FeatureKind, FeatureVector};
use crate::Real;

pub const FEATURE_MAGIC: &[u8; 4] = b"MDFV";
const FEATURE_VERSION: u32 = 1;

/// One feature vector for one snippet.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord<T> {
    pub snippet_id: String,
    pub vector: FeatureVector<T>,
}

/// Binary layout, all integers u32 little-endian:
/// magic, version, record count, then per record the snippet id and
/// feature name as length-prefixed UTF-8, the dimension, and the values as
/// f64 little-endian.
pub fn write_features_binary<T: Real, W: Write>(records: &[FeatureRecord<T>], w: &mut W) -> io::Result<()> {
    let len = |n: usize| u32::try_from(n).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "length exceeds u32"));
    w.write_all(FEATURE_MAGIC)?;
    w.write_all(&FEATURE_VERSION.to_le_bytes())?;
    w.write_all(&len(records.len())?.to_le_bytes())?;
    for r in records {
        for s in [r.snippet_id.clone(), r.vector.kind.to_string()] {
            w.write_all(&len(s.len())?.to_le_bytes())?;
            w.write_all(s.as_bytes())?;
        }
        w.write_all(&len(r.vector.dim())?.to_le_bytes())?;
        for v in r.vector.values() {
            w.write_all(&v.to_f64_lossy().to_le_bytes())?;
        }
    }
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    context: &'a str,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> BaselineError {
        BaselineError::Format {
            context: format!("{}@{}", self.context, self.pos),
            message: message.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], BaselineError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let Some(end) = end else {
            return Err(self.err("truncated file"));
        };
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, BaselineError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn string(&mut self) -> Result<String, BaselineError> {
        let n = self.u32()? as usize;
        let raw = self.take(n)?;
        String::from_utf8(raw.to_vec()).map_err(|_| self.err("invalid UTF-8"))
    }
}

fn check_dims<T>(records: &[FeatureRecord<T>]) -> Result<(), BaselineError>
where
    T: Real,
{
    let mut dims: BTreeMap<&FeatureKind, usize> = BTreeMap::new();
    for r in records {
        let expected = *dims.entry(&r.vector.kind).or_insert(r.vector.dim());
        if expected != r.vector.dim() {
            return Err(BaselineError::DimMismatch {
                expected,
                found: r.vector.dim(),
            });
        }
    }
    Ok(())
}

/// Parse feature bytes: binary when the magic matches, CSV otherwise.
pub fn read_features_bytes<T: Real>(bytes: &[u8], context: &str) -> Result<Vec<FeatureRecord<T>>, BaselineError> {
    if !bytes.starts_with(FEATURE_MAGIC) {
        let text = std::str::from_utf8(bytes).map_err(|_| BaselineError::Format {
            context: context.into(),
            message: "neither binary features nor UTF-8 CSV".into(),
        })?;
        return parse_feature_csv(text, context);
    }
    let mut c = Cursor { bytes, pos: 4, context };
    let version = c.u32()?;
    if version != FEATURE_VERSION {
        return Err(c.err(format!("unsupported version {version}")));
    }
    let count = c.u32()? as usize;
    let mut records = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let snippet_id = c.string()?;
        let kind: FeatureKind = c.string()?.parse().expect("infallible");
        let dim = c.u32()? as usize;
        let raw = c.take(dim.checked_mul(8).ok_or_else(|| c.err("dimension overflow"))?)?;
        let values = raw
            .chunks_exact(8)
            .map(|b| T::from_f64_lossy(f64::from_le_bytes(b.try_into().expect("8 bytes"))))
            .collect();
        records.push(FeatureRecord {
            snippet_id,
            vector: FeatureVector::new(kind, values)?,
        });
    }
    if c.pos != bytes.len() {
        return Err(c.err("trailing bytes"));
    }
    check_dims(&records)?;
    Ok(records)
}

/// CSV fallback: `snippet_id,feature_name,v1,v2,...` per line. A header
/// row starting with `snippet_id` is skipped.
pub fn parse_feature_csv<T: Real>(text: &str, context: &str) -> Result<Vec<FeatureRecord<T>>, BaselineError> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("snippet_id")) {
            continue;
        }
        let err = |message: String| BaselineError::Format {
            context: format!("{context}:{}", i + 1),
            message,
        };
        let mut fields = line.split(',').map(str::trim);
        let (Some(id), Some(name)) = (fields.next(), fields.next()) else {
            return Err(err("expected snippet_id,feature_name,values...".into()));
        };
        let values = fields
            .map(|f| f.parse::<f64>().map(T::from_f64_lossy).map_err(|_| err(format!("bad value {f:?}"))))
            .collect::<Result<Vec<T>, _>>()?;
        records.push(FeatureRecord {
            snippet_id: id.to_string(),
            vector: FeatureVector::new(name.parse().expect("infallible"), values)?,
        });
    }
    check_dims(&records)?;
    Ok(records)
}

pub fn read_features<T: Real>(path: &Path) -> Result<Vec<FeatureRecord<T>>, BaselineError> {
    let bytes = std::fs::read(path).map_err(|e| BaselineError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    read_features_bytes(&bytes, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, kind: FeatureKind, v: &[f64]) -> FeatureRecord<f64> {
        FeatureRecord {
            snippet_id: id.into(),
            vector: FeatureVector::new(kind, v.to_vec()).unwrap(),
        }
    }

    #[test]
    fn header_layout() {
        let mut buf = Vec::new();
        write_features_binary(&[rec("s1", FeatureKind::Dt, &[1.0, 2.0])], &mut buf).unwrap();
        assert_eq!(&buf[..4], b"MDFV");
        assert_eq!(&buf[4..8], &1u32.to_le_bytes());
        assert_eq!(&buf[8..12], &1u32.to_le_bytes());
        assert_eq!(buf.len(), 12 + 4 + 2 + 4 + 2 + 4 + 16);
    }

    #[test]
    fn csv_fallback() {
        let csv = "snippet_id,feature,v\ns1,LSDA,0.5,0.5\ns2,places,1,0\n";
        let r = read_features_bytes::<f64>(csv.as_bytes(), "f.csv").unwrap();
        assert_eq!(r[1].vector.kind, FeatureKind::Places);
        assert_eq!(r[0].vector.values(), &[0.5, 0.5]);
        let bad = "s1,DT,1,2\ns2,DT,1\n";
        assert_eq!(
            parse_feature_csv::<f64>(bad, "b").unwrap_err(),
            BaselineError::DimMismatch { expected: 2, found: 1 }
        );
        assert!(parse_feature_csv::<f64>("s1,DT,x\n", "c").is_err());
        assert_eq!(parse_feature_csv::<f64>("s1,DT,NaN\n", "c").unwrap_err(), BaselineError::NonFinite);
    }

    #[test]
    fn truncation_is_reported() {
        let mut buf = Vec::new();
        write_features_binary(&[rec("s1", FeatureKind::Dt, &[1.0, 2.0])], &mut buf).unwrap();
        for cut in [5, 13, buf.len() - 1] {
            assert!(read_features_bytes::<f64>(&buf[..cut], "x").is_err());
        }
        buf.push(0);
        assert!(read_features_bytes::<f64>(&buf, "x").is_err());
    }

    proptest! {
        #[test]
        fn binary_round_trip(rows in prop::collection::vec(("[a-z0-9_]{1,6}", prop::collection::vec(-1e6f64..1e6, 3)), 0..20)) {
            let records: Vec<_> = rows
                .iter()
                .enumerate()
                .map(|(i, (id, v))| rec(id, if i % 2 == 0 { FeatureKind::Hybrid } else { FeatureKind::Other("mine".into()) }, v))
                .collect();
            let mut buf = Vec::new();
            write_features_binary(&records, &mut buf).unwrap();
            prop_assert_eq!(read_features_bytes::<f64>(&buf, "p").unwrap(), records);
        }
    }
}
