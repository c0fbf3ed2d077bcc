#ifndef MGPD_IO_HPP
#define MGPD_IO_HPP

#include <string>

#include "mgpd/params.hpp"
#include "mgpd/spectral.hpp"
#include "mgpd/stdf.hpp"

namespace mgpd {

/// JSON object {variant, dim, params, seed?, n_mc?}. Monte Carlo models are
/// serializable only when they carry construction provenance (a named base
/// generator plus seed and sample count).
std::string to_json(const StdfModel& m);
StdfModel stdf_from_json(const std::string& text);

/// {"type":"gp", sigma, gamma, tau, pi, stdf}. On read, tau may be given
/// directly or via pi (a valid tau choice).
std::string to_json(const GpParams& h);
GpParams gp_from_json(const std::string& text);

/// {"type":"gev", mu, gamma, alpha, stdf}.
std::string to_json(const GevParams& g);
GevParams gev_from_json(const std::string& text);

/// Either parametrization, keyed by the "type" field.
bool json_is_gev(const std::string& text);

/// CSV with header x1,...,xd; atoms serialize as "-inf". The sidecar holds
/// {seed, stream, n, d, representation, params}.
void write_batch_csv(const SampleBatch& batch, const std::string& path);
std::string batch_sidecar_json(const SampleBatch& batch);
SampleBatch read_batch_csv(const std::string& path);

}  // namespace mgpd

#endif  // MGPD_IO_HPP
