//! Standalone HTML export of a feedback report.

use std::fmt::Write;

use super::{FeedbackReport, FeedbackSection};
use crate::session::Scenario;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

const STYLE: &str = "body{font-family:system-ui,sans-serif;max-width:46rem;margin:2rem auto;padding:0 1rem;line-height:1.5;color:#1f2933}\
h1{font-size:1.6rem}h2{font-size:1.2rem;margin-top:1.8rem;border-bottom:1px solid #d9e2ec}\
.meta{color:#52606d}footer{margin-top:2.5rem;font-size:.9rem;color:#52606d}";

/// Renders `report` as an HTML5 document. Every model- or user-derived
/// string is escaped. The four report sections are the only `<h2>`
/// headings; grounding sources are listed in the footer.
pub fn render_feedback_html(report: &FeedbackReport, scenario: &Scenario) -> String {
    let title = escape(&scenario.title);
    let generated = report.generated_at.to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let mut html = String::with_capacity(4096);
    let _ = write!(
        html,
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n\
         <meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n\
         <title>Conversation feedback: {title}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n<main>\n\
         <h1>Conversation feedback</h1>\n\
         <p class=\"meta\">Scenario: <span class=\"scenario-title\">{title}</span></p>\n\
         <p class=\"meta\">Generated <time datetime=\"{generated}\">{generated}</time></p>\n"
    );

    let _ = write!(
        html,
        "<section id=\"{}\">\n<h2>{}</h2>\n",
        FeedbackSection::OverallStyle.slug(),
        FeedbackSection::OverallStyle.title()
    );
    for paragraph in report.overall_style.split("\n\n") {
        let _ = writeln!(html, "<p>{}</p>", escape(paragraph));
    }
    html.push_str("</section>\n");

    for section in &FeedbackSection::ALL[1..] {
        let _ = write!(html, "<section id=\"{}\">\n<h2>{}</h2>\n<ul>\n", section.slug(), section.title());
        for item in report.list(*section).unwrap_or_default() {
            let _ = writeln!(html, "<li>{}</li>", escape(item));
        }
        html.push_str("</ul>\n</section>\n");
    }

    html.push_str("</main>\n<footer>\n<p>Grounding sources</p>\n");
    if report.grounding.is_empty() {
        html.push_str("<p class=\"no-sources\">No guidance excerpts were retrieved for this report.</p>\n");
    } else {
        html.push_str("<ol class=\"sources\">\n");
        for source in &report.grounding {
            let _ = writeln!(
                html,
                "<li><code>{}</code> (similarity {:.3}): {}</li>",
                escape(&source.chunk_id),
                source.score,
                escape(&source.chunk_text)
            );
        }
        html.push_str("</ol>\n");
    }
    html.push_str("</footer>\n</body>\n</html>\n");
    html
}
