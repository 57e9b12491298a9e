#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtsim/curve.hpp"
#include "vtsim/rng.hpp"

namespace vtsim::crypto {

using ec::CurveParams;
using ec::CurvePoint;
using ec::Scalar;

class CryptoError : public std::runtime_error {
public:
  enum class Kind {
    InvalidPeerKey,
    EncodingFailure,
    MessageOutOfRange,
    IdentityPoint,
    InvalidEphemeral,
    InvalidChallenge,
    PayloadTooLong,
    DecryptionGarbage,
  };

  CryptoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct KeyPair {
  Scalar private_key = 0;
  CurvePoint public_key = CurvePoint::identity();
};

/// Two-point ElGamal ciphertext: c1 = kG, c2 = Pm + k*PB.
struct CipherPair {
  CurvePoint c1 = CurvePoint::identity();
  CurvePoint c2 = CurvePoint::identity();
  bool operator==(const CipherPair&) const = default;
};

struct SharedSecret {
  CurvePoint point = CurvePoint::identity();
  std::vector<std::uint8_t> key_bytes; // x-coordinate, big-endian, width of q
};

struct EncodedBlock {
  CurvePoint point = CurvePoint::identity();
  unsigned payload_bits = 0;
};

struct Challenge {
  Scalar scalar = 0;
  CurvePoint point = CurvePoint::identity();
};

/// Private scalar uniform in [1, n).
KeyPair keygen(const CurveParams& params, Rng& rng);
KeyPair keypair_from_private(Scalar private_key, const CurveParams& params);

/// my_private * peer_public. Rejects the identity and off-curve peers.
SharedSecret ecdh_shared(Scalar my_private, const CurvePoint& peer_public, const CurveParams& params);

/// Expansion factor used when none is configured: 4 for toy fields, 16 otherwise.
unsigned default_kappa(const CurveParams& params) noexcept;
/// Bits of message carried per point: floor(log2(q / kappa)).
unsigned payload_bits(const CurveParams& params, unsigned kappa) noexcept;

/// Koblitz embedding: the smallest j in [0, kappa) such that x = m*kappa + j is
/// the abscissa of a curve point; returns (x, smaller root).
EncodedBlock encode_message(std::uint64_t m, const CurveParams& params, unsigned kappa);
std::uint64_t decode_message(const EncodedBlock& block, unsigned kappa);

CipherPair elgamal_encrypt(const CurvePoint& pm, const CurvePoint& receiver_public, Scalar k,
                           const CurveParams& params);
CurvePoint elgamal_decrypt(const CipherPair& ct, Scalar receiver_private, const CurveParams& params);

/// Splits bytes into payload_bits-wide integers: one length block, then the
/// little-endian bit stream of the payload, zero padded.
std::vector<std::uint64_t> pack_blocks(std::span<const std::uint8_t> payload, unsigned bits);
/// Inverse of pack_blocks. Throws DecryptionGarbage on inconsistent framing.
std::vector<std::uint8_t> unpack_blocks(std::span<const std::uint64_t> blocks, unsigned bits);

/// Frames, encodes and encrypts each block under a fresh ephemeral from rng.
std::vector<CipherPair> encrypt_bytes(std::span<const std::uint8_t> payload,
                                      const CurvePoint& receiver_public, const CurveParams& params,
                                      unsigned kappa, Rng& rng);
std::vector<std::uint8_t> decrypt_bytes(std::span<const CipherPair> blocks, Scalar receiver_private,
                                        const CurveParams& params, unsigned kappa);

Challenge auth_challenge(const CurveParams& params, Rng& rng);
CurvePoint auth_respond(Scalar vehicle_private, const CurvePoint& challenge_point,
                        const CurveParams& params);
bool auth_verify(const CurvePoint& response, Scalar challenge_scalar, const CurvePoint& vehicle_public,
                 const CurveParams& params);

} // namespace vtsim::crypto
