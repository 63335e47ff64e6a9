#ifndef GAMMAFLOW_VERSION_HPP
#define GAMMAFLOW_VERSION_HPP

#define GAMMAFLOW_VERSION "0.1.0"

#endif
