//! `label_2` object annotations.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::ObjectClass;

/// One annotation row. Dimensions are stored in file order (h, w, l) and the
/// location is the bottom-face center in rectified camera coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct KittiLabel {
    pub class_name: String,
    pub truncation: f64,
    pub occlusion: i32,
    pub alpha: f64,
    pub bbox2d: [f64; 4],
    /// (h, w, l) meters.
    pub dims: [f64; 3],
    pub location: [f64; 3],
    pub rotation_y: f64,
    /// Detection score column of result files; ignored by augmentation.
    pub score: Option<f64>,
}

impl KittiLabel {
    pub fn is_dont_care(&self) -> bool {
        self.class_name == "DontCare"
    }

    /// The class when this row should become a box.
    pub fn object_class(&self) -> Option<ObjectClass> {
        self.class_name.parse().ok()
    }

    pub fn height(&self) -> f64 {
        self.dims[0]
    }

    pub fn width(&self) -> f64 {
        self.dims[1]
    }

    pub fn length(&self) -> f64 {
        self.dims[2]
    }

    pub fn parse_line(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 15 && fields.len() != 16 {
            return Err(format!("expected 15 or 16 fields, found {}", fields.len()));
        }
        let num = |i: usize| -> std::result::Result<f64, String> {
            fields[i]
                .parse::<f64>()
                .map_err(|_| format!("field {} `{}` is not a number", i + 1, fields[i]))
        };
        let occlusion = fields[2]
            .parse::<i32>()
            .map_err(|_| format!("occlusion `{}` is not an integer", fields[2]))?;
        Ok(Self {
            class_name: fields[0].to_string(),
            truncation: num(1)?,
            occlusion,
            alpha: num(3)?,
            bbox2d: [num(4)?, num(5)?, num(6)?, num(7)?],
            dims: [num(8)?, num(9)?, num(10)?],
            location: [num(11)?, num(12)?, num(13)?],
            rotation_y: num(14)?,
            score: if fields.len() == 16 { Some(num(15)?) } else { None },
        })
    }

    /// Formats the row with two decimals, as the official devkit writes it.
    pub fn to_line(&self) -> String {
        let mut s = format!(
            "{} {:.2} {} {:.2}",
            self.class_name, self.truncation, self.occlusion, self.alpha
        );
        for v in self
            .bbox2d
            .iter()
            .chain(&self.dims)
            .chain(&self.location)
            .chain(std::iter::once(&self.rotation_y))
        {
            write!(s, " {v:.2}").unwrap();
        }
        if let Some(score) = self.score {
            write!(s, " {score:.2}").unwrap();
        }
        s
    }
}

pub fn parse_labels(text: &str, path: &Path) -> Result<Vec<KittiLabel>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            KittiLabel::parse_line(l).map_err(|reason| Error::MalformedLabel {
                path: path.to_path_buf(),
                line: i + 1,
                reason,
            })
        })
        .collect()
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<KittiLabel>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, path)
}

pub fn write_labels(labels: &[KittiLabel], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::new();
    for l in labels {
        text.push_str(&l.to_line());
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_field_order() {
        let l = KittiLabel::parse_line("Car 0.00 0 -1.57 0 0 50 50 1.5 1.6 3.9 1.0 1.5 20.0 0.0").unwrap();
        assert_eq!(l.class_name, "Car");
        assert_eq!(l.dims, [1.5, 1.6, 3.9]);
        assert_eq!(l.location, [1.0, 1.5, 20.0]);
        assert_eq!(l.rotation_y, 0.0);
        assert_eq!(l.object_class(), Some(ObjectClass::Car));
        assert_eq!(l.score, None);
    }

    #[test]
    fn dont_care_passes_through() {
        let l = KittiLabel::parse_line(
            "DontCare -1 -1 -10 503.89 169.71 590.61 190.13 -1 -1 -1 -1000 -1000 -1000 -10",
        )
        .unwrap();
        assert!(l.is_dont_care());
        assert_eq!(l.object_class(), None);
        assert_eq!(l.dims, [-1.0; 3]);
    }

    #[test]
    fn score_column_tolerated() {
        let l = KittiLabel::parse_line("Pedestrian 0 0 0 0 0 1 1 1.7 0.6 0.8 1 1 9 0.3 0.87").unwrap();
        assert_eq!(l.score, Some(0.87));
    }

    #[test]
    fn wrong_arity_names_line() {
        let text = "Car 0 0 0 0 0 1 1 1.5 1.6 3.9 1 1.5 20 0\nCar 0 0 0\n";
        match parse_labels(text, Path::new("x.txt")) {
            Err(Error::MalformedLabel { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed line, got {other:?}"),
        }
        let text17 = "Car 0 0 0 0 0 1 1 1.5 1.6 3.9 1 1.5 20 0 1 2";
        assert!(parse_labels(text17, Path::new("x.txt")).is_err());
    }

    #[test]
    fn empty_file_is_empty_list() {
        assert!(parse_labels("", Path::new("x.txt")).unwrap().is_empty());
    }

    #[test]
    fn formatted_line_reparses() {
        let line = "Cyclist 0.00 1 -1.57 10.00 20.00 50.00 80.00 1.73 0.60 1.76 -3.20 1.60 14.25 -1.52";
        let l = KittiLabel::parse_line(line).unwrap();
        assert_eq!(l.to_line(), line);
    }
}
