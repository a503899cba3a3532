#include "bethe_vqe/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace bethe_vqe::cli {

namespace {

std::string strip(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::string s = strip(text);
  if (!s.empty() && (s.front() == '(' || s.front() == '[')) {
    const char close = s.front() == '(' ? ')' : ']';
    if (s.back() != close) throw std::invalid_argument("unbalanced list: " + text);
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::string> items;
  if (s.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    items.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (const auto& item : items)
    if (item.empty()) throw std::invalid_argument("empty list entry: " + text);
  return items;
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: " + text);
  }
  if (used != text.size()) throw std::invalid_argument("not a number: " + text);
  return value;
}

int decimals_of(const std::string& number) {
  const auto dot = number.find('.');
  if (dot == std::string::npos) return -1;
  int count = 0;
  for (std::size_t i = dot + 1; i < number.size() && std::isdigit(static_cast<unsigned char>(number[i])); ++i)
    ++count;
  return count;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i') return {parse_number(s), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_number(part);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_number(body.substr(0, split)), imag_of(body.substr(split))};
}

std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> values;
  for (const auto& item : split_list(text)) values.push_back(parse_complex(item));
  return values;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) values.push_back(parse_number(item));
  return values;
}

std::vector<long long> parse_integer_list(const std::string& text) {
  std::vector<long long> values;
  for (const auto& item : split_list(text)) {
    const double v = parse_number(item);
    if (v != std::floor(v)) throw std::invalid_argument("not an integer: " + item);
    values.push_back(static_cast<long long>(v));
  }
  return values;
}

double printed_tolerance(const std::string& text) {
  const std::string s = strip(text);
  int decimals = 5;
  std::string number;
  for (char c : s + ' ') {
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number.push_back(c);
    } else if (!number.empty()) {
      const int d = decimals_of(number);
      if (d >= 0) decimals = std::min(decimals, d);
      number.clear();
    }
  }
  return 0.5 * std::pow(10.0, -decimals);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw std::invalid_argument("format must be json or csv");
}

ChainModel RunConfig::model() const {
  ChainModel m = boundary == Boundary::Closed ? ChainModel::closed(length, delta)
                                              : ChainModel::open(length, delta, h, h_prime);
  m.validate();
  if (down_spins < 0 || down_spins > length) throw std::invalid_argument("M must lie in [0, L]");
  return m;
}

Evaluator RunConfig::parsed_evaluator() const {
  Evaluator e = Evaluator::parse(evaluator);
  if (e.shots) e.shots->seed = seed;
  return e;
}

OptimizerConfig RunConfig::optimizer() const {
  OptimizerConfig c;
  if (simplex_scale) c.initial_simplex_scale = *simplex_scale;
  if (max_iterations) c.max_iterations = *max_iterations;
  return c;
}

}  // namespace bethe_vqe::cli
