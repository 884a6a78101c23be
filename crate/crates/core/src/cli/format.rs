use serde::Serialize;

use crate::cli::CliError;

/// Shortest representation that parses back to the same double.
pub(crate) fn num(v: f64) -> String {
    format!("{v:?}")
}

pub(crate) fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub(crate) fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))
}

pub(crate) fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf)
}

pub(crate) fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_formatting() {
        for v in [0.0, 1.0, 0.1, 1e-4, 2.5e-17, 0.24883, 1.0 / 3.0, 12345.678] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(1.0), "1.0");
        assert_eq!(opt_num(None), "");
    }

    #[test]
    fn csv_uses_lf() {
        let mut buf = Vec::new();
        {
            let mut w = csv_writer(&mut buf);
            w.write_record(["a", "b"]).unwrap();
            w.write_record(["1", "x,y"]).unwrap();
            w.flush().unwrap();
        }
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
