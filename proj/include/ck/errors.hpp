#pragma once

#include <stdexcept>
#include <string>

namespace ck {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidSpace : Error {
    explicit InvalidSpace(const std::string& what) : Error(what) {}
};
struct UnknownPoint : Error {
    explicit UnknownPoint(const std::string& what) : Error(what) {}
};
struct NotConnected : Error {
    explicit NotConnected(const std::string& what) : Error(what) {}
};
struct NotLocallyOpen : Error {
    explicit NotLocallyOpen(const std::string& what) : Error(what) {}
};
struct AxiomsNotVerified : Error {
    explicit AxiomsNotVerified(const std::string& what) : Error(what) {}
};
struct InvalidTable : Error {
    explicit InvalidTable(const std::string& what) : Error(what) {}
};
struct NotInChart : Error {
    explicit NotInChart(const std::string& what) : Error(what) {}
};
struct DegenerateLoop : Error {
    explicit DegenerateLoop(const std::string& what) : Error(what) {}
};
struct NotCovered : Error {
    explicit NotCovered(const std::string& what) : Error(what) {}
};
struct BudgetExhausted : Error {
    explicit BudgetExhausted(const std::string& what) : Error(what) {}
};
struct UnsupportedMapKind : Error {
    explicit UnsupportedMapKind(const std::string& what) : Error(what) {}
};
struct CrossChartUnsupported : Error {
    explicit CrossChartUnsupported(const std::string& what) : Error(what) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};
struct UnknownCheck : Error {
    explicit UnknownCheck(const std::string& what) : Error(what) {}
};

}  // namespace ck
