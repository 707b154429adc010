#include "lad/semeval.hpp"

#include <cctype>
#include <cstring>
#include <map>
#include <memory>

#include "lad/common.hpp"
#include "lad/io.hpp"

namespace lad {

namespace {

// A small DOM for the subset of XML the SemEval ABSA files use: elements,
// attributes, character data, comments, CDATA, numeric and named entities.
struct XmlElement {
  std::string name;
  std::map<std::string, std::string> attributes;
  std::vector<std::unique_ptr<XmlElement>> children;
  std::string text;  // concatenated character data of this element

  const XmlElement* first(const std::string& child_name) const {
    for (const auto& c : children) {
      if (c->name == child_name) return c.get();
    }
    return nullptr;
  }
};

class XmlParser {
 public:
  explicit XmlParser(const std::string& input) : in_(input) {}

  std::unique_ptr<XmlElement> parse() {
    skip_prolog_and_misc();
    auto root = parse_element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < in_.size(); ++i) {
      if (in_[i] == '\n') ++line;
    }
    throw DataError("malformed XML (line " + std::to_string(line) + "): " + why);
  }

  bool starts_with(const char* s) const { return in_.compare(pos_, strlen(s), s) == 0; }

  void skip_ws() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        const auto end = in_.find("-->", pos_ + 4);
        if (end == std::string::npos) fail("unterminated comment");
        pos_ = end + 3;
      } else if (starts_with("<?")) {
        const auto end = in_.find("?>", pos_ + 2);
        if (end == std::string::npos) fail("unterminated processing instruction");
        pos_ = end + 2;
      } else {
        return;
      }
    }
  }

  void skip_prolog_and_misc() {
    skip_misc();
    if (starts_with("<!DOCTYPE")) {
      const auto end = in_.find('>', pos_);
      if (end == std::string::npos) fail("unterminated DOCTYPE");
      pos_ = end + 1;
      skip_misc();
    }
  }

  std::string parse_name() {
    const std::size_t start = pos_;
    while (pos_ < in_.size()) {
      const char c = in_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
          c == '.') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a name");
    return in_.substr(start, pos_ - start);
  }

  std::string decode_entities(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] != '&') {
        out += raw[i++];
        continue;
      }
      const auto semi = raw.find(';', i + 1);
      if (semi == std::string::npos) fail("unterminated entity reference");
      const std::string entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "amp") {
        out += '&';
      } else if (entity == "lt") {
        out += '<';
      } else if (entity == "gt") {
        out += '>';
      } else if (entity == "quot") {
        out += '"';
      } else if (entity == "apos") {
        out += '\'';
      } else if (!entity.empty() && entity[0] == '#') {
        long code = 0;
        try {
          code = (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X'))
                     ? std::stol(entity.substr(2), nullptr, 16)
                     : std::stol(entity.substr(1));
        } catch (const std::exception&) {
          fail("bad numeric entity: &" + entity + ";");
        }
        // encode the codepoint as UTF-8
        const char32_t cp = static_cast<char32_t>(code);
        if (cp < 0x80) {
          out += static_cast<char>(cp);
        } else if (cp < 0x800) {
          out += static_cast<char>(0xC0 | (cp >> 6));
          out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
          out += static_cast<char>(0xE0 | (cp >> 12));
          out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
          out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
          out += static_cast<char>(0xF0 | (cp >> 18));
          out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
          out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
          out += static_cast<char>(0x80 | (cp & 0x3F));
        }
      } else {
        fail("unknown entity: &" + entity + ";");
      }
      i = semi + 1;
    }
    return out;
  }

  std::string parse_attribute_value() {
    if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\''))
      fail("expected a quoted attribute value");
    const char quote = in_[pos_++];
    const auto end = in_.find(quote, pos_);
    if (end == std::string::npos) fail("unterminated attribute value");
    std::string raw = in_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return decode_entities(raw);
  }

  std::unique_ptr<XmlElement> parse_element() {
    if (pos_ >= in_.size() || in_[pos_] != '<') fail("expected an element");
    ++pos_;
    auto element = std::make_unique<XmlElement>();
    element->name = parse_name();
    for (;;) {
      skip_ws();
      if (pos_ >= in_.size()) fail("unterminated start tag for <" + element->name + ">");
      if (in_[pos_] == '/') {
        if (pos_ + 1 >= in_.size() || in_[pos_ + 1] != '>') fail("malformed empty-element tag");
        pos_ += 2;
        return element;
      }
      if (in_[pos_] == '>') {
        ++pos_;
        break;
      }
      const std::string attr = parse_name();
      skip_ws();
      if (pos_ >= in_.size() || in_[pos_] != '=') fail("expected '=' after attribute " + attr);
      ++pos_;
      skip_ws();
      element->attributes[attr] = parse_attribute_value();
    }
    // content
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated element <" + element->name + ">");
      if (in_[pos_] == '<') {
        if (starts_with("<!--")) {
          const auto end = in_.find("-->", pos_ + 4);
          if (end == std::string::npos) fail("unterminated comment");
          pos_ = end + 3;
        } else if (starts_with("<![CDATA[")) {
          const auto end = in_.find("]]>", pos_ + 9);
          if (end == std::string::npos) fail("unterminated CDATA section");
          element->text += in_.substr(pos_ + 9, end - pos_ - 9);
          pos_ = end + 3;
        } else if (starts_with("</")) {
          pos_ += 2;
          const std::string closing = parse_name();
          if (closing != element->name)
            fail("mismatched closing tag </" + closing + "> for <" + element->name + ">");
          skip_ws();
          if (pos_ >= in_.size() || in_[pos_] != '>') fail("malformed closing tag");
          ++pos_;
          return element;
        } else {
          element->children.push_back(parse_element());
        }
      } else {
        const auto next = in_.find('<', pos_);
        if (next == std::string::npos) fail("unterminated element <" + element->name + ">");
        element->text += decode_entities(in_.substr(pos_, next - pos_));
        pos_ = next;
      }
    }
  }

  const std::string& in_;
  std::size_t pos_ = 0;
};

void collect_sentence(const XmlElement& sentence, const char* term_list, const char* term_item,
                      const char* term_attr, std::vector<SemEvalSentence>& out) {
  SemEvalSentence s;
  auto it = sentence.attributes.find("id");
  s.id = it == sentence.attributes.end() ? std::to_string(out.size() + 1) : it->second;
  if (const XmlElement* text = sentence.first("text")) s.text = text->text;
  if (const XmlElement* list = sentence.first(term_list)) {
    for (const auto& child : list->children) {
      if (child->name != term_item) continue;
      auto attr = child->attributes.find(term_attr);
      if (attr == child->attributes.end()) continue;
      if (attr->second == "NULL") continue;  // implicit target, no surface form
      s.aspect_terms.push_back(attr->second);
    }
  }
  out.push_back(std::move(s));
}

}  // namespace

std::vector<SemEvalSentence> parse_semeval_xml(const std::string& xml_text) {
  XmlParser parser(xml_text);
  const auto root = parser.parse();
  std::vector<SemEvalSentence> sentences;

  if (root->name == "sentences") {
    // SemEval-2014 schema
    for (const auto& sentence : root->children) {
      if (sentence->name != "sentence") continue;
      collect_sentence(*sentence, "aspectTerms", "aspectTerm", "term", sentences);
    }
  } else if (root->name == "Reviews") {
    // SemEval-2015/2016 schema
    for (const auto& review : root->children) {
      if (review->name != "Review") continue;
      const XmlElement* sents = review->first("sentences");
      if (!sents) continue;
      for (const auto& sentence : sents->children) {
        if (sentence->name != "sentence") continue;
        collect_sentence(*sentence, "Opinions", "Opinion", "target", sentences);
      }
    }
  } else {
    throw DataError("unknown SemEval schema: unexpected root element <" + root->name + ">");
  }
  return sentences;
}

std::vector<SemEvalSentence> load_semeval_xml(const std::filesystem::path& path) {
  return parse_semeval_xml(read_file(path));
}

}  // namespace lad
