# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.


"""
Mostly utility functions motionkit uses internally that don't
really belong anywhere else in the modules.
"""
import codecs
import errno
from hashlib import sha1
import os
import sys

try:
    import ujson as json
except ImportError:
    import json


def to_bytestring(s):
    """ convert to bytestring an unicode """
    if isinstance(s, str):
        return s.encode('utf-8')
    return s


def read_file(fname, utf8=True):
    """ read file content"""
    if utf8:
        with codecs.open(fname, 'rb', "utf-8") as f:
            return f.read()
    with open(fname, 'rb') as f:
        return f.read()


def write_content(fname, content):
    """ write content in a file

    :attr fname: string,filename
    :attr content: string or bytes
    """
    with open(fname, 'wb') as f:
        f.write(to_bytestring(content))


def canonical_json(content):
    """ json text with sorted keys, stable across runs """
    return json.dumps(content, sort_keys=True)


def write_json(filename, content):
    """ serialize content in json and save it

    :attr filename: string
    :attr content: json-compatible object
    """
    write_content(filename, canonical_json(content))


def read_json(filename, missing_ok=False):
    """ read a json file and deserialize

    :attr filename: string
    :attr missing_ok: boolean, default is False. If True a missing
    file reads as an empty dict.

    :return: dict or list
    """
    try:
        data = read_file(filename)
    except IOError as e:
        if missing_ok and e.errno == errno.ENOENT:
            return {}
        raise

    try:
        return json.loads(data)
    except ValueError:
        print("Json is invalid, can't load %s" % filename, file=sys.stderr)
        raise


def sign_content(content):
    """ return sha1 hexdigest of a json-compatible object

    :attr content: json-compatible object

    :return: string, sha1 hexdigest
    """
    return sha1(to_bytestring(canonical_json(content))).hexdigest()


def ensure_dir(path):
    """ create `path` (and parents) if needed and return it """
    if not os.path.isdir(path):
        os.makedirs(path)
    return path


def load_class(uri):
    """ resolve a dotted uri like ``motionkit.variants.Variant``.

    Raises ImportError, AttributeError or ValueError when it can't be
    resolved.
    """
    components = uri.split('.')
    klass = components.pop(-1)
    mod = __import__('.'.join(components))
    for comp in components[1:]:
        mod = getattr(mod, comp)
    return getattr(mod, klass)
