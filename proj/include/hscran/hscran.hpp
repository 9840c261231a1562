#ifndef HSCRAN_HSCRAN_HPP
#define HSCRAN_HSCRAN_HPP

#include "hscran/bits.hpp"
#include "hscran/channel.hpp"
#include "hscran/codec.hpp"
#include "hscran/crc.hpp"
#include "hscran/dci.hpp"
#include "hscran/digipath.hpp"
#include "hscran/error.hpp"
#include "hscran/fft.hpp"
#include "hscran/grid.hpp"
#include "hscran/image.hpp"
#include "hscran/iq_file.hpp"
#include "hscran/metrics.hpp"
#include "hscran/modem.hpp"
#include "hscran/pipeline.hpp"
#include "hscran/plugin.hpp"
#include "hscran/report.hpp"
#include "hscran/rng.hpp"
#include "hscran/semantic_codec.hpp"
#include "hscran/sempath.hpp"
#include "hscran/simulate.hpp"
#include "hscran/types.hpp"
#include "hscran/wire.hpp"

#endif // HSCRAN_HSCRAN_HPP
