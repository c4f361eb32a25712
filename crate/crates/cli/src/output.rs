use serde::Serialize;

/// Serialises records as CSV with a header, or as one JSON object per line.
pub fn render<T: Serialize>(rows: &[T], json: bool) -> Result<Vec<u8>, String> {
    let mut buf = Vec::new();
    if json {
        for row in rows {
            serde_json::to_writer(&mut buf, row).map_err(|e| e.to_string())?;
            buf.push(b'\n');
        }
    } else {
        let mut w = csv::Writer::from_writer(&mut buf);
        for row in rows {
            w.serialize(row).map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())?;
    }
    Ok(buf)
}
