import os
import nacl.secret

key = os.urandom(32)
box = nacl.secret.SecretBox(key)
