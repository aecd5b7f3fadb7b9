#include "belief/mass_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

namespace belief {

std::string format_real(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("cannot serialize a non-finite number");
  }
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value,
                                    std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

std::string json_quote(std::string_view text) {
  return nlohmann::json(std::string(text)).dump();
}

namespace {

template <typename Element>
std::string mass_document(const MassFunction<Element>& m,
                          std::string_view algebra) {
  const Frame& frame = m.frame();
  std::vector<std::pair<Element, double>> focal(m.focal().begin(),
                                                m.focal().end());
  std::sort(focal.begin(), focal.end(), [&](const auto& a, const auto& b) {
    return canonical_less(frame, a.first, b.first);
  });
  std::string out = "{\"frame\":[";
  for (int i = 0; i < frame.size(); ++i) {
    if (i) out += ',';
    out += json_quote(frame.label(i));
  }
  out += "],\"algebra\":";
  out += json_quote(algebra);
  out += ",\"focal\":[";
  for (std::size_t k = 0; k < focal.size(); ++k) {
    if (k) out += ',';
    out += "{\"element\":";
    out += json_quote(format_element(frame, focal[k].first));
    out += ",\"mass\":";
    out += format_real(focal[k].second);
    out += '}';
  }
  out += "]}";
  return out;
}

}  // namespace

std::string to_json(const PowerMass& m) { return mass_document(m, "power"); }
std::string to_json(const HyperMass& m) { return mass_document(m, "hyper"); }

AnyMass mass_from_json(std::string_view text, MassOptions options) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed mass JSON: ") + e.what());
  }
  try {
    Frame frame(doc.at("frame").get<std::vector<std::string>>());
    const auto algebra = doc.at("algebra").get<std::string>();
    const auto& focal = doc.at("focal");
    if (algebra == "power") {
      std::vector<PowerMass::Focal> items;
      for (const auto& f : focal) {
        items.emplace_back(parse_power(frame, f.at("element").get<std::string>()),
                           f.at("mass").get<double>());
      }
      if (std::any_of(items.begin(), items.end(),
                      [](const auto& f) { return f.first.empty(); })) {
        options.allow_conflict = true;
      }
      return PowerMass(frame, std::move(items), options);
    }
    if (algebra == "hyper") {
      std::vector<HyperMass::Focal> items;
      for (const auto& f : focal) {
        items.emplace_back(parse_hyper(frame, f.at("element").get<std::string>()),
                           f.at("mass").get<double>());
      }
      return HyperMass(frame, std::move(items), options);
    }
    throw Error("unknown algebra '" + algebra + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid mass document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("invalid mass document: ") + e.what());
  }
}

}  // namespace belief
