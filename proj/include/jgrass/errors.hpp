#ifndef JGRASS_ERRORS_HPP
#define JGRASS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jgrass {

// Base class for everything this library throws on its own behalf.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& what) : Error(what) {}
};

struct RankDeficient : Error {
  explicit RankDeficient(const std::string& what) : Error(what) {}
};

struct OddDimension : Error {
  explicit OddDimension(const std::string& what) : Error(what) {}
};

struct NotComplexStructure : Error {
  explicit NotComplexStructure(const std::string& what) : Error(what) {}
};

struct SingularConjugator : Error {
  explicit SingularConjugator(const std::string& what) : Error(what) {}
};

struct SamplingExhausted : Error {
  explicit SamplingExhausted(const std::string& what) : Error(what) {}
};

struct NotOrthogonal : Error {
  explicit NotOrthogonal(const std::string& what) : Error(what) {}
};

struct ClusterAmbiguity : Error {
  explicit ClusterAmbiguity(const std::string& what) : Error(what) {}
};

struct InvalidSignature : Error {
  explicit InvalidSignature(const std::string& what) : Error(what) {}
};

struct EmptySubspace : Error {
  explicit EmptySubspace(const std::string& what) : Error(what) {}
};

struct NonGenericSpectrum : Error {
  explicit NonGenericSpectrum(const std::string& what) : Error(what) {}
};

struct NotInvariant : Error {
  explicit NotInvariant(const std::string& what) : Error(what) {}
};

struct NotTransverse : Error {
  explicit NotTransverse(const std::string& what) : Error(what) {}
};

struct NotOrthonormal : Error {
  explicit NotOrthonormal(const std::string& what) : Error(what) {}
};

}  // namespace jgrass

#endif  // JGRASS_ERRORS_HPP
