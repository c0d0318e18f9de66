#include <fstream>
#include <sstream>

#include "zsbench/errors.hpp"
#include "zsbench/preprocess.hpp"
#include "zsbench/util.hpp"

namespace zsbench {

namespace detail {
extern const std::string_view kEnglishStopwordsText;
}

StopWords StopWords::parse(std::string_view text) {
  StopWords out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') out.words_.insert(ascii_lower(line));
    pos = end + 1;
  }
  return out;
}

StopWords StopWords::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stop-word list: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const StopWords& default_stopwords() {
  static const StopWords words = StopWords::parse(detail::kEnglishStopwordsText);
  return words;
}

}  // namespace zsbench
