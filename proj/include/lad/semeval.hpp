#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lad {

// One annotated sentence from a SemEval ABSA restaurant file.
struct SemEvalSentence {
  std::string id;
  std::string text;
  std::vector<std::string> aspect_terms;  // raw surface forms, "NULL" excluded
};

// Parses both ABSA schemas:
//   2014:      <sentences><sentence><text/><aspectTerms><aspectTerm term=../>
//   2015/2016: <Reviews><Review><sentences><sentence><text/>
//                <Opinions><Opinion target=../>
// Throws DataError on malformed XML or an unrecognized root element.
std::vector<SemEvalSentence> parse_semeval_xml(const std::string& xml_text);
std::vector<SemEvalSentence> load_semeval_xml(const std::filesystem::path& path);

}  // namespace lad
